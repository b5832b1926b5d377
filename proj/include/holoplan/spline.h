#ifndef HOLOPLAN_SPLINE_H_
#define HOLOPLAN_SPLINE_H_

#include <vector>

#include "holoplan/geometry.h"
#include "holoplan/rrt_star.h"

namespace holoplan {

// Natural cubic spline through (knots[i], values[i]); knots strictly increasing.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline() = default;
  NaturalCubicSpline(std::vector<double> knots, std::vector<double> values);

  double Evaluate(double u) const;
  double Derivative(double u) const;

 private:
  std::size_t Segment(double u) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> second_;  // second derivatives at the knots
};

// 3-D natural cubic spline parameterized by cumulative chord length.
class CubicSplinePath {
 public:
  // Consecutive duplicate points are dropped. Throws DegeneratePath for a
  // zero-length point list.
  explicit CubicSplinePath(const std::vector<Vec3>& points);

  double ParameterEnd() const { return knots_.back(); }
  Vec3 Evaluate(double u) const;
  Vec3 Derivative(double u) const;
  double ArcLength() const { return cumulative_.back(); }
  // Arc length from 0 to u.
  double ArcLengthAt(double u) const;
  // Parameter at which the arc length from 0 equals `s`.
  double ParameterAtArcLength(double s) const;

 private:
  double IntegrateSpeed(double a, double b) const;

  std::vector<Vec3> points_;
  std::vector<double> knots_;
  NaturalCubicSpline x_;
  NaturalCubicSpline y_;
  NaturalCubicSpline z_;
  // Arc-length table over a uniform refinement of the knot intervals.
  std::vector<double> table_u_;
  std::vector<double> cumulative_;
};

// Adds evenly spaced points so that no segment is longer than `max_spacing`.
std::vector<Vec3> Densify(const std::vector<Vec3>& points, double max_spacing);

inline constexpr double kDefaultKnotSpacing = 0.05;

// Fits a chord-length natural cubic spline through the (densified) waypoints
// and returns `m` vertices uniform in arc length. Endpoints are copied
// exactly. Throws DegeneratePath, ResampleCollision.
CandidatePath ResampleUniform(const CandidatePath& path, int m, const Workspace& ws,
                              double knot_spacing = kDefaultKnotSpacing);

// 0.5 - 0.5 cos(pi s): zero slope at both ends.
double CosineFraction(double s);

// Fraction at s = k / n, evaluated so that exact rational points stay exact.
double CosineFractionAt(int k, int n);

struct TimedVertices {
  std::vector<Vec3> points;
  std::vector<double> fractions;  // arc fraction of each point along the input
};

// Emits n_t points at arc fractions CosineFraction(k / (n_t - 1)), linearly
// interpolated along the uniform vertex polyline.
TimedVertices CosineReparameterize(const std::vector<Vec3>& uniform_vertices, int n_t);

}  // namespace holoplan

#endif  // HOLOPLAN_SPLINE_H_
