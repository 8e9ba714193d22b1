#pragma once

#include <cstdint>

#include "permlocal/bigint.hpp"

namespace permlocal {

// Deterministic cross-platform stream: xoshiro256++ state seeded from
// splitmix64 over (seed, stream_id).  Identical (seed, stream_id) yields the
// identical draw sequence on every platform; distinct stream_ids give
// decorrelated streams for parallel workers.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream_id = 0);

  uint64_t next_u64();

  // Uniform in [0,1) with 53 random bits.
  double next_double();

  // Unbiased uniform integer in [0, bound); bound >= 1.
  uint64_t uniform_below(uint64_t bound);

  // Unbiased uniform big integer in [0, bound); bound >= 1.
  BigInt uniform_below_big(const BigInt& bound);

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_; }

 private:
  uint64_t s_[4];
  uint64_t seed_;
  uint64_t stream_;
};

}  // namespace permlocal
