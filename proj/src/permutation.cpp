#include "permlocal/permutation.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace permlocal {

Permutation::Permutation(std::vector<int> values) : vals_(std::move(values)) {
  const int n = (int)vals_.size();
  std::vector<char> seen((size_t)n + 1, 0);
  for (int v : vals_) {
    if (v < 1 || v > n || seen[(size_t)v])
      throw std::invalid_argument("not a permutation of 1..n");
    seen[(size_t)v] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> v((size_t)n);
  std::iota(v.begin(), v.end(), 1);
  return Permutation(std::move(v));
}

Permutation Permutation::reversed(int n) {
  std::vector<int> v((size_t)n);
  for (int i = 0; i < n; ++i) v[(size_t)i] = n - i;
  return Permutation(std::move(v));
}

long long InversionSequence::sum() const {
  long long s = 0;
  for (long long e : terms) s += e;
  return s;
}

long long inv_count_quadratic(const Permutation& p) {
  const int n = p.size();
  long long c = 0;
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (p(i) > p(j)) ++c;
  return c;
}

long long inv_count_logn(const Permutation& p) {
  const int n = p.size();
  RankSelect rs(n);
  long long c = 0;
  // e_j = number of earlier values greater than p(j)
  for (int j = 1; j <= n; ++j) {
    c += (j - 1) - rs.count_leq(p(j));
    rs.add(p(j));
  }
  return c;
}

long long inv_count(const Permutation& p) {
  return p.size() > 64 ? inv_count_logn(p) : inv_count_quadratic(p);
}

SmallRatio inv_density(const Permutation& p) {
  const long long n = p.size();
  if (n < 2) throw std::domain_error("inversion density needs n >= 2");
  long long num = inv_count(p);
  long long den = n * (n - 1) / 2;
  long long g = std::gcd(num, den);
  if (g == 0) g = 1;
  return SmallRatio{num / g, den / g};
}

long long total_displacement(const Permutation& p) {
  long long td = 0;
  for (int j = 1; j <= p.size(); ++j) td += std::abs((long long)p(j) - j);
  return td;
}

InversionSequence to_inv_sequence(const Permutation& p) {
  const int n = p.size();
  InversionSequence s;
  s.terms.resize((size_t)n);
  RankSelect rs(n);
  for (int j = 1; j <= n; ++j) {
    s.terms[(size_t)j - 1] = (j - 1) - rs.count_leq(p(j));
    rs.add(p(j));
  }
  return s;
}

static void check_code(const InversionSequence& s) {
  for (size_t j = 0; j < s.terms.size(); ++j) {
    if (s.terms[j] < 0 || s.terms[j] > (long long)j)
      throw std::invalid_argument("inversion sequence needs 0 <= e_j < j");
  }
}

Permutation from_inv_sequence(const InversionSequence& s) {
  check_code(s);
  const int n = (int)s.terms.size();
  std::vector<int> vals((size_t)n);
  RankSelect rs(n);
  rs.reset_full();
  // Right to left: position j takes the (e_j+1)-th largest unused value,
  // i.e. the (j - e_j)-th smallest of the j values still available.
  for (int j = n; j >= 1; --j) {
    int v = rs.select(j - (int)s.terms[(size_t)j - 1]);
    vals[(size_t)j - 1] = v;
    rs.remove(v);
  }
  return Permutation(std::move(vals));
}

std::vector<int> window_values_via_left_code(const InversionSequence& s, int w) {
  check_code(s);
  const int n = (int)s.terms.size();
  if (w > n) w = n;
  // Reversed, the code gives L_j <= n-j inversions whose left end is at
  // position j; position j then takes the (L_j+1)-th smallest unused value.
  std::vector<int> vals((size_t)w);
  RankSelect rs(n);
  rs.reset_full();
  for (int j = 1; j <= w; ++j) {
    int v = rs.select((int)s.terms[(size_t)(n - j)] + 1);
    vals[(size_t)j - 1] = v;
    rs.remove(v);
  }
  return vals;
}

Permutation psi_shift(const Permutation& p) {
  const int n = p.size();
  const int last = p(n);
  const int first = n + 1 - last;
  std::vector<int> out((size_t)n);
  out[0] = first;
  for (int i = 1; i < n; ++i) {
    int v = p(i);
    if (first <= v && v < last) ++v;
    else if (last < v && v <= first) --v;
    out[(size_t)i] = v;
  }
  return Permutation(std::move(out));
}

Permutation psi_unshift(const Permutation& p) {
  const int n = p.size();
  const int first = p(1);
  const int last = n + 1 - first;
  std::vector<int> out((size_t)n);
  out[(size_t)n - 1] = last;
  for (int i = 2; i <= n; ++i) {
    int v = p(i);
    if (first < v && v <= last) --v;
    else if (last <= v && v < first) ++v;
    out[(size_t)i - 2] = v;
  }
  return Permutation(std::move(out));
}

Permutation window_pattern(const Permutation& p, int j, int k) {
  const int n = p.size();
  if (k < 1 || j < 1 || j > n + 1 - k)
    throw std::out_of_range("window out of bounds");
  std::vector<int> out((size_t)k);
  for (int a = 0; a < k; ++a) {
    int rank = 1;
    for (int b = 0; b < k; ++b)
      if (p(j + b) < p(j + a)) ++rank;
    out[(size_t)a] = rank;
  }
  return Permutation(std::move(out));
}

RankSelect::RankSelect(int n) : n_(n), tree_((size_t)n + 1, 0) {
  log2_ = 0;
  while ((1 << (log2_ + 1)) <= n_) ++log2_;
}

void RankSelect::reset_full() {
  std::fill(tree_.begin(), tree_.end(), 0);
  for (int v = 1; v <= n_; ++v) {
    tree_[(size_t)v] += 1;
    int parent = v + (v & -v);
    if (parent <= n_) tree_[(size_t)parent] += tree_[(size_t)v];
  }
}

void RankSelect::remove(int v) {
  for (; v <= n_; v += v & -v) tree_[(size_t)v] -= 1;
}

void RankSelect::add(int v) {
  for (; v <= n_; v += v & -v) tree_[(size_t)v] += 1;
}

int RankSelect::count_leq(int v) const {
  if (v > n_) v = n_;
  int c = 0;
  for (; v > 0; v -= v & -v) c += tree_[(size_t)v];
  return c;
}

int RankSelect::select(int k) const {
  int pos = 0;
  for (int step = 1 << log2_; step > 0; step >>= 1) {
    int next = pos + step;
    if (next <= n_ && tree_[(size_t)next] < k) {
      pos = next;
      k -= tree_[(size_t)pos];
    }
  }
  return pos + 1;
}

}  // namespace permlocal
