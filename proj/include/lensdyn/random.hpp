#pragma once

#include <cstdint>
#include <random>

namespace lensdyn {

// mt19937_64 with platform-independent integer sampling. std::mt19937_64's
// output sequence is fixed by the standard; the distributions are not, so
// bounded draws use rejection sampling here instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  // Independent stream for case `stream` of a suite seeded with `seed`.
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    eng_.seed(seq);
  }

  std::uint64_t next() { return eng_(); }

  // Uniform in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  // 53-bit uniform double in [0, 1).
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace lensdyn
