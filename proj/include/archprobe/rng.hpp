#pragma once

#include <cmath>
#include <cstdint>

namespace archprobe {

// SplitMix64 step; used to expand seeds and to hash stream coordinates.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Child seed for independent sub-tasks (per-sequence models, per-seed cells).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t sm =
      seed ^ (index * 0x9e3779b97f4a7c15ULL + 0x517cc1b727220a95ULL);
  return splitmix64(sm);
}

// Role tag for derived streams. Values are part of the determinism contract:
// changing them changes every initialized network.
enum class StreamRole : std::uint64_t {
  Weights = 1,
  Biases = 2,
  GateWeights = 3,
  GateBiases = 4,
  Phases = 5,
  Magnitudes = 6,
  Data = 7,
  Shuffle = 8,
  Corners = 9,
};

// xoshiro256++ with splittable seeding. Streams are derived as
// hash(seed, index, role), so adding layers or roles never perturbs the
// draws of existing ones.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static Rng stream(std::uint64_t seed, std::uint64_t index, StreamRole role) {
    std::uint64_t sm = seed;
    std::uint64_t a = splitmix64(sm);
    sm = a ^ (index * 0x9e3779b97f4a7c15ULL);
    std::uint64_t b = splitmix64(sm);
    sm = b ^ static_cast<std::uint64_t>(role);
    return Rng(splitmix64(sm));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer on [0,n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  // Standard normal via Box-Muller; one draw cached.
  double gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // Student-t with 3 degrees of freedom (variance 3).
  double student_t3() {
    const double z = gaussian();
    double chi2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double g = gaussian();
      chi2 += g * g;
    }
    return z / std::sqrt(chi2 / 3.0);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace archprobe
