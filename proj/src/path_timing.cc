#include <algorithm>
#include <cmath>

#include "holoplan/error.h"
#include "holoplan/spline.h"

namespace holoplan {

double CosineFraction(double s) { return 0.5 - 0.5 * std::cos(M_PI * s); }

double CosineFractionAt(int k, int n) {
  // Extended precision keeps rational points such as k/n = 1/3 exact after rounding.
  constexpr long double kPi = 3.141592653589793238462643383279502884L;
  const long double c = std::cos(kPi * static_cast<long double>(k) / static_cast<long double>(n));
  return static_cast<double>(0.5L - 0.5L * c);
}

TimedVertices CosineReparameterize(const std::vector<Vec3>& uniform_vertices, int n_t) {
  if (uniform_vertices.empty() || n_t < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need vertices and N_t >= 2");
  }
  std::vector<double> cumulative(uniform_vertices.size(), 0.0);
  for (std::size_t i = 1; i < uniform_vertices.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + (uniform_vertices[i] - uniform_vertices[i - 1]).norm();
  }
  const double total = cumulative.back();

  TimedVertices out;
  out.points.reserve(n_t);
  out.fractions.reserve(n_t);
  for (int k = 0; k < n_t; ++k) {
    const double f = k == n_t - 1 ? 1.0 : CosineFractionAt(k, n_t - 1);
    out.fractions.push_back(f);
    if (total <= 0.0 || k == 0) {
      out.points.push_back(uniform_vertices.front());
      continue;
    }
    if (k == n_t - 1) {
      out.points.push_back(uniform_vertices.back());
      continue;
    }
    const double target = f * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const std::size_t i = std::min<std::size_t>(
        static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative.begin(), 1)),
        cumulative.size() - 1);
    const double seg = cumulative[i] - cumulative[i - 1];
    const double t = seg > 0.0 ? (target - cumulative[i - 1]) / seg : 0.0;
    out.points.push_back(uniform_vertices[i - 1] + t * (uniform_vertices[i] - uniform_vertices[i - 1]));
  }
  return out;
}

}  // namespace holoplan
