#pragma once

// Brute-force oracles used by the tests.  Everything here recomputes the
// quantities from first principles (pair scans and exhaustive enumeration)
// so the checks stay independent of the library's counting paths.

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

inline long long inv_pairs(const std::vector<int>& v) {
  long long c = 0;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j)
      if (v[i] > v[j]) ++c;
  return c;
}

// Calls fn for every permutation of 1..n in lexicographic order.
inline void for_each_perm(int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> v((size_t)n);
  std::iota(v.begin(), v.end(), 1);
  do {
    fn(v);
  } while (std::next_permutation(v.begin(), v.end()));
}

// Rank standardization of a window, independent of the library.
inline std::vector<int> standardize(const std::vector<int>& w) {
  std::vector<int> out(w.size());
  for (size_t a = 0; a < w.size(); ++a) {
    int r = 1;
    for (size_t b = 0; b < w.size(); ++b)
      if (w[b] < w[a]) ++r;
    out[a] = r;
  }
  return out;
}

// Number of ways to place s balls into the given boxes (box i holds up to
// caps[i] balls), by direct recursion.  Small inputs only.
inline long long fillings(const std::vector<long long>& caps, long long s) {
  if (s < 0) return 0;
  if (caps.empty()) return s == 0 ? 1 : 0;
  std::vector<long long> rest(caps.begin() + 1, caps.end());
  long long total = 0;
  for (long long v = 0; v <= std::min(caps.front(), s); ++v)
    total += fillings(rest, s - v);
  return total;
}

inline long long factorial(long long n) {
  long long f = 1;
  for (long long i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace oracle
