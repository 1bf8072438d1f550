#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace latbench {

namespace detail {

// splitmix64 finalizer; good diffusion for deriving substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Deterministic random stream backed by std::mt19937_64 (the engine's output
/// sequence is fully specified by the standard, so identical seeds give
/// identical draws everywhere).  Substreams derived from (seed, id...) tuples
/// are what the simulation layer hands to each frame.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  static Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0) {
    std::uint64_t s = seed;
    s = detail::mix64(s + 0x9e3779b97f4a7c15ull * (a + 1));
    s = detail::mix64(s + 0x9e3779b97f4a7c15ull * (b + 1));
    s = detail::mix64(s + 0x9e3779b97f4a7c15ull * (c + 1));
    return Rng(s);
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on the open interval (0,1); never returns an endpoint.
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller with a cached spare.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = uniform01();
    double v = uniform01();
    double r = std::sqrt(-2.0 * std::log(u));
    double t = 6.28318530717958647692528676655900577 * v;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  /// Unbiased uniform integer in [0, n), n >= 1.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    for (;;) {
      std::uint64_t x = gen_();
      if (x < limit) return x % n;
    }
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace latbench
