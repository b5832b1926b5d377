#include "holoplan/spline.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "holoplan/error.h"

namespace holoplan {

namespace {

// 5-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 5> kGlNodes = {0.0, -0.5384693101056831, 0.5384693101056831,
                                            -0.9061798459386640, 0.9061798459386640};
constexpr std::array<double, 5> kGlWeights = {0.5688888888888889, 0.4786286704993665,
                                              0.4786286704993665, 0.2369268850561891,
                                              0.2369268850561891};
constexpr int kArcTableRefinement = 8;

}  // namespace

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  const std::size_t n = knots_.size();
  if (n < 2 || values_.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "spline needs >= 2 knots and matching values");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(knots_[i] > knots_[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "spline knots must be strictly increasing");
    }
  }
  second_.assign(n, 0.0);
  if (n == 2) return;

  // Thomas algorithm on the interior equations; natural ends M_0 = M_{n-1} = 0.
  const std::size_t m = n - 2;
  std::vector<double> diag(m), upper(m), rhs(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    const double h0 = knots_[i] - knots_[i - 1];
    const double h1 = knots_[i + 1] - knots_[i];
    diag[k] = 2.0 * (h0 + h1);
    upper[k] = h1;
    rhs[k] = 6.0 * ((values_[i + 1] - values_[i]) / h1 - (values_[i] - values_[i - 1]) / h0);
  }
  for (std::size_t k = 1; k < m; ++k) {
    const double lower = knots_[k + 1] - knots_[k];  // h_{i-1} for row i = k + 1
    const double w = lower / diag[k - 1];
    diag[k] -= w * upper[k - 1];
    rhs[k] -= w * rhs[k - 1];
  }
  second_[m] = rhs[m - 1] / diag[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) {
    second_[k + 1] = (rhs[k] - upper[k] * second_[k + 2]) / diag[k];
  }
}

std::size_t NaturalCubicSpline::Segment(double u) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
  const std::size_t idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - knots_.begin(), 1));
  return std::min(idx, knots_.size() - 1) - 1;
}

double NaturalCubicSpline::Evaluate(double u) const {
  const std::size_t i = Segment(u);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - u) / h;
  const double b = (u - knots_[i]) / h;
  return a * values_[i] + b * values_[i + 1] +
         ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]) * h * h / 6.0;
}

double NaturalCubicSpline::Derivative(double u) const {
  const std::size_t i = Segment(u);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - u) / h;
  const double b = (u - knots_[i]) / h;
  return (values_[i + 1] - values_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * second_[i] +
         (3.0 * b * b - 1.0) / 6.0 * h * second_[i + 1];
}

CubicSplinePath::CubicSplinePath(const std::vector<Vec3>& points) {
  for (const auto& p : points) {
    if (points_.empty() || (p - points_.back()).norm() > 1e-12) points_.push_back(p);
  }
  if (points_.size() < 2) throw Error(ErrorCode::kDegeneratePath, "path has zero length");

  knots_.assign(1, 0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    knots_.push_back(knots_.back() + (points_[i] - points_[i - 1]).norm());
  }
  std::vector<double> xs, ys, zs;
  for (const auto& p : points_) {
    xs.push_back(p.x());
    ys.push_back(p.y());
    zs.push_back(p.z());
  }
  x_ = NaturalCubicSpline(knots_, xs);
  y_ = NaturalCubicSpline(knots_, ys);
  z_ = NaturalCubicSpline(knots_, zs);

  table_u_.push_back(0.0);
  cumulative_.push_back(0.0);
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const double h = (knots_[i + 1] - knots_[i]) / kArcTableRefinement;
    for (int j = 1; j <= kArcTableRefinement; ++j) {
      const double u = j == kArcTableRefinement ? knots_[i + 1] : knots_[i] + j * h;
      cumulative_.push_back(cumulative_.back() + IntegrateSpeed(table_u_.back(), u));
      table_u_.push_back(u);
    }
  }
}

Vec3 CubicSplinePath::Evaluate(double u) const {
  return {x_.Evaluate(u), y_.Evaluate(u), z_.Evaluate(u)};
}

Vec3 CubicSplinePath::Derivative(double u) const {
  return {x_.Derivative(u), y_.Derivative(u), z_.Derivative(u)};
}

double CubicSplinePath::IntegrateSpeed(double a, double b) const {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
    sum += kGlWeights[k] * Derivative(mid + half * kGlNodes[k]).norm();
  }
  return sum * half;
}

double CubicSplinePath::ArcLengthAt(double u) const {
  u = std::clamp(u, 0.0, ParameterEnd());
  const auto it = std::upper_bound(table_u_.begin(), table_u_.end(), u);
  const std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - table_u_.begin(), 1)) - 1;
  if (i + 1 >= table_u_.size()) return cumulative_.back();
  return cumulative_[i] + IntegrateSpeed(table_u_[i], u);
}

double CubicSplinePath::ParameterAtArcLength(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= ArcLength()) return ParameterEnd();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  double lo = table_u_[i];
  double hi = table_u_[i + 1];
  const double base = cumulative_[i];
  for (int iter = 0; iter < 60 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (base + IntegrateSpeed(table_u_[i], mid) < s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<Vec3> Densify(const std::vector<Vec3>& points, double max_spacing) {
  std::vector<Vec3> out;
  if (points.empty()) return out;
  out.push_back(points.front());
  for (std::size_t i = 1; i < points.size(); ++i) {
    const Vec3& a = points[i - 1];
    const Vec3& b = points[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a).norm() / max_spacing)));
    for (int j = 1; j < pieces; ++j) out.push_back(a + (b - a) * (static_cast<double>(j) / pieces));
    out.push_back(b);
  }
  return out;
}

CandidatePath ResampleUniform(const CandidatePath& path, int m, const Workspace& ws,
                              double knot_spacing) {
  if (path.waypoints.size() < 2 || m < 2) {
    throw Error(ErrorCode::kInvalidArgument, "resampling needs >= 2 waypoints and M >= 2");
  }
  if (PolylineLength(path.waypoints) <= 1e-12) {
    throw Error(ErrorCode::kDegeneratePath, "path has zero length");
  }
  const CubicSplinePath spline(Densify(path.waypoints, knot_spacing));

  CandidatePath out = path;
  out.waypoints.clear();
  out.waypoints.reserve(m);
  const double total = spline.ArcLength();
  for (int k = 0; k < m; ++k) {
    if (k == 0) {
      out.waypoints.push_back(path.waypoints.front());
    } else if (k == m - 1) {
      out.waypoints.push_back(path.waypoints.back());
    } else {
      const double s = total * static_cast<double>(k) / (m - 1);
      out.waypoints.push_back(spline.Evaluate(spline.ParameterAtArcLength(s)));
    }
  }
  for (int k = 1; k < m; ++k) {
    if (!ws.SegmentFree(out.waypoints[k - 1], out.waypoints[k])) {
      throw Error(ErrorCode::kResampleCollision,
                  "smoothed segment " + std::to_string(k - 1) + " leaves C_free");
    }
  }
  out.cost = PolylineLength(out.waypoints);
  return out;
}

}  // namespace holoplan
