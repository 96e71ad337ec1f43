#ifndef STKIT_RNG_HPP
#define STKIT_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace stkit {

// Seeded generator used everywhere randomness is needed. std::mt19937_64 has
// a fully specified output sequence; the derived draws below avoid the
// standard <random> distributions, whose outputs are implementation-defined,
// so the same seed gives the same stream on every build.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Unbiased integer in [0, n). n must be > 0.
  uint64_t below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t r;
    do {
      r = gen_();
    } while (r >= limit);
    return r % n;
  }

  // Standard normal via Box-Muller; second value of each pair is cached.
  double gaussian();

  // Fisher-Yates with draws from below(); std::shuffle is not reproducible
  // across standard library implementations.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// Stage/index seed derivation: every stage draws from the one top-level seed
// through these, so outputs do not depend on execution order.
uint64_t derive_seed(uint64_t base, uint64_t index);
uint64_t derive_seed(uint64_t base, std::string_view label);

}  // namespace stkit

#endif  // STKIT_RNG_HPP
