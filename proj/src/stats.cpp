#include "permlocal/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace permlocal::stats {

namespace {

constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;

// Lower series, valid for x < a+1.
double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double del = sum;
  double ap = a;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper continued fraction (modified Lentz), valid for x >= a+1.
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -(double)i * ((double)i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_q needs a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must be in (0,1)");
  auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ChiSquareResult chi_square(const std::vector<long long>& counts,
                           const std::vector<double>& expected) {
  if (counts.empty() || counts.size() != expected.size())
    throw std::invalid_argument("counts/expected size mismatch");
  ChiSquareResult r;
  long long pooled_count = 0;
  long long cells = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (expected[i] <= 0.0) {
      pooled_count += counts[i];
      r.merged_cells = true;
      continue;
    }
    const double d = (double)counts[i] - expected[i];
    r.statistic += d * d / expected[i];
    ++cells;
  }
  if (pooled_count > 0) {
    // observations in cells that should be impossible
    r.statistic = std::numeric_limits<double>::infinity();
  }
  r.df = cells - 1;
  if (r.df <= 0)
    r.p_value = r.statistic == 0.0 ? 1.0 : 0.0;
  else if (std::isinf(r.statistic))
    r.p_value = 0.0;
  else
    r.p_value = gamma_q((double)r.df / 2.0, r.statistic / 2.0);
  return r;
}

ChiSquareResult chi_square_two_sample(const std::vector<long long>& a,
                                      const std::vector<long long>& b) {
  if (a.empty() || a.size() != b.size())
    throw std::invalid_argument("sample size mismatch");
  double na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    na += (double)a[i];
    nb += (double)b[i];
  }
  if (na <= 0 || nb <= 0) throw std::invalid_argument("empty sample");
  const double ra = std::sqrt(nb / na), rb = std::sqrt(na / nb);
  ChiSquareResult r;
  long long cells = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const long long tot = a[i] + b[i];
    if (tot == 0) {
      r.merged_cells = true;
      continue;
    }
    const double d = ra * (double)a[i] - rb * (double)b[i];
    r.statistic += d * d / (double)tot;
    ++cells;
  }
  r.df = cells - 1;
  r.p_value = r.df > 0 ? gamma_q((double)r.df / 2.0, r.statistic / 2.0)
                       : (r.statistic == 0.0 ? 1.0 : 0.0);
  return r;
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("size mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

Interval wilson_ci(long long successes, long long trials, double level) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw std::invalid_argument("bad wilson_ci inputs");
  const double z = inverse_normal_cdf(1.0 - (1.0 - level) / 2.0);
  const double n = (double)trials;
  const double p = (double)successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval iv;
  iv.low = std::max(0.0, center - half);
  iv.high = std::min(1.0, center + half);
  return iv;
}

}  // namespace permlocal::stats
