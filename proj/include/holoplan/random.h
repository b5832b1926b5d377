#ifndef HOLOPLAN_RANDOM_H_
#define HOLOPLAN_RANDOM_H_

#include <cstdint>
#include <random>

namespace holoplan {

// Seeded stream whose doubles do not depend on the standard library's
// distribution implementation, so seeded results are reproducible across
// toolchains.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace holoplan

#endif  // HOLOPLAN_RANDOM_H_
