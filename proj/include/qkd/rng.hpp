#pragma once

#include <cstdint>

namespace qkd {

// splitmix64 step; used to expand one 64-bit seed into generator state.
std::uint64_t splitmix64(std::uint64_t& state);

// xoshiro256** 1.0 (Blackman/Vigna). The four state words are filled from
// the seed with splitmix64, so a single integer reproduces a whole run.
// Reference vectors live in tests/test_rng.cpp and in the README.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // 53-bit uniform in [0, 1): (next_u64() >> 11) * 2^-53.
    double next_double();

    // Top bit of the next word.
    int next_bit();

    // Unbiased draw in [0, n): rejection sampling on r % n with
    // threshold 2^64 mod n. n must be nonzero.
    std::uint64_t next_below(std::uint64_t n);

  private:
    std::uint64_t s_[4];
};

} // namespace qkd
