#include "permlocal/rng.hpp"

namespace permlocal {

namespace {

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

struct SplitMix64 {
  uint64_t x;
  uint64_t next() {
    uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

}  // namespace

RngStream::RngStream(uint64_t seed, uint64_t stream_id)
    : seed_(seed), stream_(stream_id) {
  SplitMix64 sm{seed};
  SplitMix64 mix{(stream_id * 0x9E3779B97F4A7C15ULL) ^ 0xD1B54A32D192ED03ULL};
  bool all_zero = true;
  for (auto& s : s_) {
    s = sm.next() ^ mix.next();
    if (s != 0) all_zero = false;
  }
  if (all_zero) s_[0] = 1;
}

uint64_t RngStream::next_u64() {
  const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::next_double() {
  return (double)(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t RngStream::uniform_below(uint64_t bound) {
  // Rejection from the top range to stay unbiased.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % bound;
}

BigInt RngStream::uniform_below_big(const BigInt& bound) {
  if (bound <= 1) return 0;
  const unsigned bits = msb(bound) + 1;
  const unsigned words = (bits + 63) / 64;
  BigInt x;
  for (;;) {
    x = 0;
    for (unsigned w = 0; w < words; ++w) {
      x <<= 64;
      x |= next_u64();
    }
    x >>= (words * 64 - bits);
    if (x < bound) return x;
  }
}

}  // namespace permlocal
