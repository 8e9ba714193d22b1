#include "permlocal/qcount_approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace permlocal::qcount {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kQOneEps = 1e-12;
}  // namespace

double tilted_mean(double q, long long count) {
  if (count <= 1) return 0.0;
  if (std::abs(q - 1.0) < kQOneEps) return (double)(count - 1) / 2.0;
  const double lq = std::log(q);
  const double c = (double)count;
  // q/(1-q) - c q^c/(1-q^c); expm1(c lq) = q^c - 1 keeps q -> 1 stable.
  return q / (1.0 - q) + c * std::exp(c * lq) / std::expm1(c * lq);
}

double tilted_var(double q, long long count) {
  if (count <= 1) return 0.0;
  if (std::abs(q - 1.0) < kQOneEps)
    return ((double)count * (double)count - 1.0) / 12.0;
  const double lq = std::log(q);
  const double c = (double)count;
  const double em1 = std::expm1(c * lq);  // q^c - 1
  return q / ((1.0 - q) * (1.0 - q)) - c * c * std::exp(c * lq) / (em1 * em1);
}

double solve_box_tilt(const std::vector<long long>& capacities, double target) {
  long long total = 0;
  for (long long c : capacities) total += c;
  if (target < 0 || 2.0 * target > (double)total)
    throw std::domain_error("tilt target out of range");
  if (2.0 * target == (double)total) return 1.0;
  if (target == 0) return std::numeric_limits<double>::min();
  auto mean_total = [&](double q) {
    double t = 0.0;
    for (long long c : capacities) t += tilted_mean(q, c + 1);
    return t;
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mean_total(mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-16) break;
  }
  return 0.5 * (lo + hi);
}

TiltedCoeffRow::TiltedCoeffRow(const std::vector<long long>& capacities,
                               long long max_degree, long long target) {
  total_capacity_ = 0;
  for (long long c : capacities) total_capacity_ += c;
  long long deg = std::min(max_degree, total_capacity_);
  if (deg < 0) throw std::domain_error("bad max_degree");

  reflected_ = 2 * target > total_capacity_;
  const long long work_target = reflected_ ? total_capacity_ - target : target;
  // Reflected queries read the palindromic mirror, so the working row must
  // reach total_capacity_ - s for every queried s <= deg.
  const long long work_deg = reflected_ ? total_capacity_ : deg;

  q_ = solve_box_tilt(capacities, (double)work_target);
  logq_ = q_ < 1.0 ? std::log(q_) : 0.0;
  lognorm_ = 0.0;

  probs_.assign((size_t)work_deg + 1, 0.0);
  probs_[0] = 1.0;
  std::vector<double> next((size_t)work_deg + 1);
  for (long long c : capacities) {
    if (c == 0) continue;
    const long long cap = c;
    double z;
    if (q_ < 1.0) {
      // S(s) = P(s) + q S(s-1); row value = S(s) - q^{c+1} S(s-c-1).
      const double qc1 = std::exp((double)(cap + 1) * logq_);
      double s_run = 0.0;
      std::vector<double>& S = next;  // reuse as the running prefix
      for (long long s = 0; s <= work_deg; ++s) {
        s_run = probs_[(size_t)s] + q_ * s_run;
        S[(size_t)s] = s_run;
      }
      for (long long s = work_deg; s >= 0; --s) {
        double v = S[(size_t)s];
        if (s - cap - 1 >= 0) v -= qc1 * S[(size_t)(s - cap - 1)];
        next[(size_t)s] = v > 0.0 ? v : 0.0;
      }
      z = std::expm1((double)(cap + 1) * logq_) / std::expm1(logq_);
    } else {
      double run = 0.0;
      std::vector<double> pref((size_t)work_deg + 1);
      for (long long s = 0; s <= work_deg; ++s) {
        run += probs_[(size_t)s];
        pref[(size_t)s] = run;
      }
      for (long long s = 0; s <= work_deg; ++s) {
        double v = pref[(size_t)s];
        if (s - cap - 1 >= 0) v -= pref[(size_t)(s - cap - 1)];
        next[(size_t)s] = v;
      }
      z = (double)(cap + 1);
    }
    std::swap(probs_, next);
    lognorm_ += std::log(z);
    double mx = *std::max_element(probs_.begin(), probs_.end());
    if (!(mx > 0.0)) throw std::runtime_error("tilted row vanished");
    for (double& v : probs_) v /= mx;
    lognorm_ += std::log(mx);
  }
}

double TiltedCoeffRow::prob(long long s) const {
  if (reflected_) s = total_capacity_ - s;
  if (s < 0 || s >= (long long)probs_.size()) return 0.0;
  return probs_[(size_t)s];
}

double TiltedCoeffRow::log_coeff(long long s) const {
  long long idx = reflected_ ? total_capacity_ - s : s;
  if (idx < 0 || idx >= (long long)probs_.size()) return kNegInf;
  const double p = probs_[(size_t)idx];
  if (p <= 0.0) return kNegInf;
  return std::log(p) + lognorm_ - (double)idx * logq_;
}

static std::vector<long long> iota_caps(long long from, long long count) {
  std::vector<long long> caps((size_t)count);
  for (long long i = 0; i < count; ++i) caps[(size_t)i] = from + i;
  return caps;
}

double approx_log_mahonian(long long n, long long m) {
  if (m < 0 || m > n * (n - 1) / 2) return kNegInf;
  TiltedCoeffRow row(iota_caps(0, n), m, m);
  return row.log_coeff(m);
}

double approx_log_prefix_count(long long n, long long m, long long k, long long ell) {
  if (k < 0 || k > n || ell < 0 || ell > k * (k - 1) / 2)
    throw std::domain_error("bad prefix parameters");
  if (m < ell) return kNegInf;
  if (k == n) return m == ell ? 0.0 : kNegInf;
  if (k == 0) return approx_log_mahonian(n, m);
  TiltedCoeffRow row(iota_caps(k, n - k), m - ell, m - ell);
  return row.log_coeff(m - ell);
}

double approx_pattern_prob(long long n, long long m, long long k, long long ell) {
  return std::exp(approx_log_prefix_count(n, m, k, ell) - approx_log_mahonian(n, m));
}

double approx_gap_prob(long long n, long long m, long long k) {
  if (k < 1 || k > n - 1) throw std::domain_error("bad gap parameters");
  std::vector<long long> caps;
  caps.reserve((size_t)(n - 2));
  for (long long j = 1; j <= k - 1; ++j) caps.push_back(j - 1);
  for (long long j = k + 2; j <= n; ++j) caps.push_back(j - 1);
  // One tilt serves every needed coefficient m-ell, ell < 2k.
  TiltedCoeffRow g(caps, m, m);
  const double lmah = approx_log_mahonian(n, m);
  double down = 0.0, up = 0.0;
  for (long long ell = 0; ell <= k - 1; ++ell) {
    double lc = g.log_coeff(m - ell);
    if (lc > kNegInf) up += (double)(ell + 1) * std::exp(lc - lmah);
  }
  for (long long ell = k; ell <= 2 * k - 1; ++ell) {
    double lc = g.log_coeff(m - ell);
    if (lc > kNegInf) down += (double)(2 * k - ell) * std::exp(lc - lmah);
  }
  (void)up;
  return down;
}

}  // namespace permlocal::qcount
