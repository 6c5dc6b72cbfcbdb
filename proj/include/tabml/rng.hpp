#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tabml {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for sub-stream `stream` of `base`. Independent of the order in which
// streams are consumed, so parallel schedules cannot change results.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

// mt19937_64 plus hand-rolled variate transforms. std:: distributions are
// implementation-defined; these are pinned so seeded output is portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // n must be > 0. Modulo bias is negligible for n << 2^64.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

  // [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean = 0.0, double sd = 1.0) {
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    return mean + sd * z;
  }

  double lognormal(double mu, double sigma) { return std::exp(normal(mu, sigma)); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace tabml
