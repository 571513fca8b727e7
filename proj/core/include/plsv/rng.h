#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace plsv {

// Counter-based generator: output k of a stream is a SplitMix64 finalizer
// applied to key + k * golden. Substreams derive fresh keys by hashing, so
// epoch/batch streams are reproducible regardless of how many draws other
// streams consumed.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t seed) : key_(Mix(seed ^ 0x6a09e667f3bcc908ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return Mix(key_ + kGolden * ++counter_); }

  Rng Split(uint64_t stream) const {
    Rng child(0);
    child.key_ = Mix(key_ ^ Mix(stream + kGolden));
    return child;
  }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double Normal() { return normal_(*this); }

  uint64_t counter() const { return counter_; }

 private:
  static constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static uint64_t Mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t key_ = 0;
  uint64_t counter_ = 0;
  std::normal_distribution<double> normal_;
};

}  // namespace plsv
