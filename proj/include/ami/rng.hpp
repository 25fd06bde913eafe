#ifndef AMI_RNG_HPP
#define AMI_RNG_HPP

// Thin deterministic RNG wrapper. std::mt19937_64 output is pinned by
// the standard, but the std::*_distribution adaptors are not, so the
// uniform mappings are done by hand to keep results reproducible on
// any standard library.

#include <cstdint>
#include <random>

namespace ami {

// Mixes a seed with a stream id so independent substreams can be
// derived from one base seed (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : gen_(mix_seed(seed, stream)) {}

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform integer in [lo, hi] (inclusive); hi - lo must fit in 32 bits.
  std::uint32_t uniform_int(std::uint32_t lo, std::uint32_t hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::uint32_t>(gen_() % span);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ami

#endif
