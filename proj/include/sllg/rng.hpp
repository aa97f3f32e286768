#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sllg {

/// Deterministic random stream. Distribution code is written out explicitly
/// (not std::*_distribution, whose sequences are implementation-defined) so
/// identical seeds give bit-identical fields on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform direction on the unit sphere.
  void unit_vector3(double out[3]) {
    double z = uniform(-1.0, 1.0);
    double phi = uniform(0.0, 6.283185307179586476925286766559);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    out[0] = r * std::cos(phi);
    out[1] = r * std::sin(phi);
    out[2] = z;
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace sllg
