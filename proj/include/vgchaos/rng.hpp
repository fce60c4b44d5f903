#pragma once

#include <cmath>
#include <cstdint>

namespace vgc {

// Counter-based generator in the splitmix64 family (Steele-Lea-Flood style
// output mixing). Every variate is a pure function of (seed, stream, index),
// so parallel sampling is reproducible independently of worker count.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x7f4a7c15a9e37955ULL))) {}

  /// Derive an independent substream (e.g. one per MC batch).
  CounterRng split(std::uint64_t stream) const { return CounterRng(key_, mix(stream + 1)); }

  /// Uniform in (0,1); `i` is the draw index, `slot` distinguishes
  /// multiple uniforms consumed by one draw.
  double u01(std::uint64_t i, std::uint64_t slot = 0) const {
    std::uint64_t z = mix(key_ + 0x9e3779b97f4a7c15ULL * i + 0xd1342543de82ef95ULL * (slot + 1));
    // 53-bit mantissa, strictly inside (0,1)
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; consumes slots (2*slot_pair, 2*slot_pair+1).
  double normal(std::uint64_t i, std::uint64_t slot_pair = 0) const {
    double u1 = u01(i, 2 * slot_pair);
    double u2 = u01(i, 2 * slot_pair + 1);
    constexpr double two_pi = 6.283185307179586476925287;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  /// Gamma(shape, rate=1) variate for draw index `i`. Marsaglia-Tsang squeeze
  /// with the boost U^{1/a} trick for shape < 1. Uniform slots start at
  /// `slot_base` and advance as the rejection loop consumes them.
  double gamma(std::uint64_t i, double shape, std::uint64_t slot_base = 16) const {
    double boost_factor = 1.0;
    double a = shape;
    std::uint64_t slot = slot_base;
    if (a < 1.0) {
      boost_factor = std::pow(u01(i, slot++), 1.0 / a);
      a += 1.0;
    }
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double u1 = u01(i, slot++);
      double u2 = u01(i, slot++);
      constexpr double two_pi = 6.283185307179586476925287;
      double x = std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = u01(i, slot++);
      double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return boost_factor * d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost_factor * d * v;
    }
  }

  std::uint64_t key() const { return key_; }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

}  // namespace vgc
