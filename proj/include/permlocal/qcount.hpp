#pragma once

#include <string>
#include <utility>
#include <vector>

#include "permlocal/bigint.hpp"
#include "permlocal/permutation.hpp"

namespace permlocal::qcount {

// Truncated coefficient list of a product of box polynomials
// 1 + q + ... + q^c over arbitrary-precision integers.  Index s holds the
// number of ways to reach a ball total of s; degrees above max_degree are
// discarded.
class CoefficientVector {
 public:
  explicit CoefficientVector(long long max_degree);
  static CoefficientVector unit(long long max_degree);

  long long max_degree() const { return max_degree_; }
  const BigInt& coeff(long long s) const;

  // In-place multiplication by 1 + q + ... + q^capacity, truncated.
  void multiply_box(long long capacity);

  BigInt total() const;

  bool operator==(const CoefficientVector&) const = default;

 private:
  long long max_degree_;
  std::vector<BigInt> coeffs_;
};

// coeff(s) = ways to place s balls into boxes of the given capacities.
CoefficientVector capacity_poly(const std::vector<long long>& capacities,
                                long long max_degree);

BigInt binomial(long long a, long long b);

// |S_{n,m}|: permutations of length n with exactly m inversions.
BigInt mahonian(long long n, long long m);
std::vector<BigInt> mahonian_row(long long n, long long max_degree);

// Weak t-compositions of s (no upper bound on the terms).
BigInt weak_comp_count(long long t, long long s);

// Weak t-compositions of s with every term < r.
BigInt restricted_comp_count(long long t, long long s, long long r);

// Inversion-sequence suffixes: weak t-compositions (e_1..e_t) of s with
// e_j < j + r.
BigInt inv_suffix_count(long long t, long long s, long long r);

// Permutations of length n with m inversions whose first k points form one
// fixed k-pattern having ell inversions.
BigInt prefix_count(long long n, long long m, long long k, long long ell);

// Split of |S_{n,m}| by the order of positions 1 and k+1:
// up counts sigma(1) < sigma(k+1), down counts the inversions.
struct GapCounts {
  BigInt up, down;
};
GapCounts gap_counts(long long n, long long m, long long k);

// Reduced exact ratio plus a floating approximation.
struct ExactProbability {
  BigInt num;
  BigInt den;
  double approx = 0.0;

  static ExactProbability make(BigInt num, BigInt den);
  std::string json() const;
};

ExactProbability exact_pattern_prob(long long n, long long m, const Permutation& tau);
ExactProbability exact_gap_prob(long long n, long long m, long long k);

// Cell budget for exact big-integer tables; larger jobs go through the
// approximate tilted rows in qcount_approx.hpp.
inline constexpr long long kExactCellBudget = 50'000'000;
inline bool within_exact_budget(long long n, long long m) {
  return n <= 0 || m < 0 || n * (m + 1) <= kExactCellBudget;
}

}  // namespace permlocal::qcount
