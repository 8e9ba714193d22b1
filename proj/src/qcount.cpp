#include "permlocal/qcount.hpp"

#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace permlocal::qcount {

CoefficientVector::CoefficientVector(long long max_degree)
    : max_degree_(max_degree), coeffs_((size_t)max_degree + 1, BigInt(0)) {
  if (max_degree < 0) throw std::domain_error("max_degree must be >= 0");
}

CoefficientVector CoefficientVector::unit(long long max_degree) {
  CoefficientVector v(max_degree);
  v.coeffs_[0] = 1;
  return v;
}

static const BigInt kZero{0};

const BigInt& CoefficientVector::coeff(long long s) const {
  if (s < 0 || s > max_degree_) return kZero;
  return coeffs_[(size_t)s];
}

void CoefficientVector::multiply_box(long long capacity) {
  if (capacity < 0) throw std::domain_error("capacity must be >= 0");
  if (capacity == 0) return;
  // out[s] = sum_{i=s-capacity}^{s} in[i], kept as a running window sum.
  BigInt run(0);
  std::vector<BigInt> out((size_t)max_degree_ + 1);
  for (long long s = 0; s <= max_degree_; ++s) {
    run += coeffs_[(size_t)s];
    if (s - capacity - 1 >= 0) run -= coeffs_[(size_t)(s - capacity - 1)];
    out[(size_t)s] = run;
  }
  coeffs_ = std::move(out);
}

BigInt CoefficientVector::total() const {
  BigInt t(0);
  for (const auto& c : coeffs_) t += c;
  return t;
}

CoefficientVector capacity_poly(const std::vector<long long>& capacities,
                                long long max_degree) {
  CoefficientVector v = CoefficientVector::unit(max_degree);
  for (long long c : capacities) v.multiply_box(c);
  return v;
}

BigInt binomial(long long a, long long b) {
  if (b < 0 || b > a) return 0;
  if (b > a - b) b = a - b;
  BigInt r(1);
  for (long long i = 0; i < b; ++i) {
    r *= a - i;
    r /= i + 1;
  }
  return r;
}

BigInt mahonian(long long n, long long m) {
  if (n < 0 || m < 0) return 0;
  if (m > n * (n - 1) / 2) return 0;
  std::vector<long long> caps((size_t)n);
  for (long long j = 0; j < n; ++j) caps[(size_t)j] = j;
  return capacity_poly(caps, m).coeff(m);
}

std::vector<BigInt> mahonian_row(long long n, long long max_degree) {
  std::vector<long long> caps((size_t)n);
  for (long long j = 0; j < n; ++j) caps[(size_t)j] = j;
  CoefficientVector v = capacity_poly(caps, max_degree);
  std::vector<BigInt> row((size_t)max_degree + 1);
  for (long long s = 0; s <= max_degree; ++s) row[(size_t)s] = v.coeff(s);
  return row;
}

BigInt weak_comp_count(long long t, long long s) {
  if (t == 0) return s == 0 ? 1 : 0;
  if (t < 0 || s < 0) return 0;
  return binomial(s + t - 1, s);
}

BigInt restricted_comp_count(long long t, long long s, long long r) {
  if (t < 1) throw std::domain_error("restricted_comp_count needs t >= 1");
  if (r < 1) throw std::domain_error("restricted_comp_count needs r >= 1");
  if (s < 0) return 0;
  if (r > s) return weak_comp_count(t, s);
  std::vector<long long> caps((size_t)t, r - 1);
  return capacity_poly(caps, s).coeff(s);
}

BigInt inv_suffix_count(long long t, long long s, long long r) {
  if (t < 1) throw std::domain_error("inv_suffix_count needs t >= 1");
  if (r < 0) throw std::domain_error("inv_suffix_count needs r >= 0");
  if (s < 0) return 0;
  if (r >= s) return weak_comp_count(t, s);
  std::vector<long long> caps((size_t)t);
  for (long long j = 0; j < t; ++j) caps[(size_t)j] = r + j;
  return capacity_poly(caps, s).coeff(s);
}

BigInt prefix_count(long long n, long long m, long long k, long long ell) {
  if (k < 0 || k > n) throw std::domain_error("prefix_count needs 0 <= k <= n");
  if (ell < 0 || ell > k * (k - 1) / 2)
    throw std::domain_error("prefix_count needs 0 <= ell <= C(k,2)");
  if (m < ell) return 0;
  if (k == n) return m == ell ? 1 : 0;
  if (k == 0) return mahonian(n, m);
  return inv_suffix_count(n - k, m - ell, k);
}

GapCounts gap_counts(long long n, long long m, long long k) {
  if (k < 1 || k > n - 1) throw std::domain_error("gap_counts needs 1 <= k <= n-1");
  if (m < 0 || m > n * (n - 1) / 2) return GapCounts{0, 0};
  // Boxes k and k+1 are absorbed into the weights: adjoining the two extra
  // points to a (k-1)-pattern adds ell inversions in ell+1 ways without an
  // inversion between positions 1 and k+1, and in 2k-ell ways with one.
  std::vector<long long> caps;
  caps.reserve((size_t)(n - 2));
  for (long long j = 1; j <= k - 1; ++j) caps.push_back(j - 1);
  for (long long j = k + 2; j <= n; ++j) caps.push_back(j - 1);
  CoefficientVector g = capacity_poly(caps, m);
  GapCounts out{0, 0};
  for (long long ell = 0; ell <= k - 1; ++ell)
    if (m - ell >= 0) out.up += (ell + 1) * g.coeff(m - ell);
  for (long long ell = k; ell <= 2 * k - 1; ++ell)
    if (m - ell >= 0) out.down += (2 * k - ell) * g.coeff(m - ell);
  return out;
}

ExactProbability ExactProbability::make(BigInt num, BigInt den) {
  if (den <= 0) throw std::domain_error("probability with empty class");
  BigInt g = gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  ExactProbability p;
  p.approx = ratio_big(num, den);
  p.num = std::move(num);
  p.den = std::move(den);
  return p;
}

std::string ExactProbability::json() const {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", approx);
  return "{\"num\": \"" + num.str() + "\", \"den\": \"" + den.str() +
         "\", \"approx\": " + buf + "}";
}

ExactProbability exact_pattern_prob(long long n, long long m, const Permutation& tau) {
  const long long k = tau.size();
  if (k > n) throw std::domain_error("pattern longer than host");
  BigInt den = mahonian(n, m);
  if (den == 0) throw std::domain_error("empty class S_{n,m}");
  BigInt num = prefix_count(n, m, k, inv_count(tau));
  return ExactProbability::make(std::move(num), std::move(den));
}

ExactProbability exact_gap_prob(long long n, long long m, long long k) {
  GapCounts gc = gap_counts(n, m, k);
  BigInt den = gc.up + gc.down;
  if (den == 0) throw std::domain_error("empty class S_{n,m}");
  return ExactProbability::make(std::move(gc.down), std::move(den));
}

}  // namespace permlocal::qcount
