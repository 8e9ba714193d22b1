#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace permlocal {

// A permutation of {1..n}, stored one-based: (*this)(i) is the value at
// position i for 1 <= i <= n.  Values are validated on construction.
class Permutation {
 public:
  explicit Permutation(std::vector<int> values);

  static Permutation identity(int n);
  static Permutation reversed(int n);

  int size() const { return (int)vals_.size(); }
  int operator()(int pos) const { return vals_[(size_t)pos - 1]; }
  const std::vector<int>& values() const { return vals_; }

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> vals_;
};

// Inversion sequence (e_1..e_n): e_j counts inversions whose right end is
// at position j, so 0 <= e_j < j.  Bijective with permutations; the sum of
// the terms is the inversion number.
struct InversionSequence {
  std::vector<long long> terms;

  long long sum() const;
  bool operator==(const InversionSequence&) const = default;
};

long long inv_count(const Permutation& p);
long long inv_count_quadratic(const Permutation& p);  // O(n^2) pair scan
long long inv_count_logn(const Permutation& p);       // order-statistics accumulation

// Exact reduced ratio of two 64-bit integers.
struct SmallRatio {
  long long num = 0;
  long long den = 1;
  double value() const { return (double)num / (double)den; }
  bool operator==(const SmallRatio&) const = default;
};

SmallRatio inv_density(const Permutation& p);  // inv / C(n,2); needs n >= 2
long long total_displacement(const Permutation& p);

InversionSequence to_inv_sequence(const Permutation& p);
Permutation from_inv_sequence(const InversionSequence& s);

// Treats the reverse of s as a left-to-right code (position j takes the
// (c_j+1)-th smallest unused value) and returns the first w values of that
// permutation.  Both code conventions run over the same multiset of box
// capacities, so when s is uniform over codes with a given sum the result
// is a window of a uniform permutation with that inversion count — without
// decoding the remaining n-w positions.
std::vector<int> window_values_via_left_code(const InversionSequence& s, int w);

// Inversion-preserving shift: removes the last point, adds a new first
// point, and moves every consecutive pattern one position to the right.
Permutation psi_shift(const Permutation& p);
Permutation psi_unshift(const Permutation& p);

// The k-permutation order-isomorphic to p(j)..p(j+k-1).
Permutation window_pattern(const Permutation& p, int j, int k);

// Rank-select structure over values 1..n; used by the code bijection and by
// samplers that only need a window of the permutation.
class RankSelect {
 public:
  explicit RankSelect(int n);
  void reset_full();             // all values present
  void remove(int v);
  void add(int v);
  int count_leq(int v) const;    // present values <= v
  int select(int k) const;       // k-th smallest present value (1-based)
  int size() const { return n_; }

 private:
  int n_;
  int log2_;
  std::vector<int> tree_;
};

}  // namespace permlocal
