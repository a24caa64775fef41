#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace recoil {

/// splitmix64: tiny, portable, bit-stable across platforms. All simulation
/// noise flows through this so that identical inputs give identical spectra.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Deterministic (master seed, run index) -> run seed derivation for
/// Monte-Carlo batches; runs stay reproducible regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 s(master ^ (0x2545f4914f6cdd1dULL * (index + 1)));
  return s.next();
}

/// Uniform/Gaussian generator on top of SplitMix64 (Box-Muller with a
/// cached spare). No standard-library distributions, so streams are
/// identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : sm_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(sm_.next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  SplitMix64 sm_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace recoil
