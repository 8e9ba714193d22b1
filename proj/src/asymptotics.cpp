#include "permlocal/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace permlocal::asymptotics {

double pattern_prob_critical(double rho, double alpha, long long k) {
  if (rho < 0.0 || rho > 1.0) throw std::domain_error("rho must be in [0,1]");
  if (alpha < 0.0) throw std::domain_error("alpha must be > 0");
  if (k < 1) throw std::domain_error("k must be >= 1");
  const double log_kfact = std::lgamma((double)k + 1.0);
  return std::exp((1.0 - 2.0 * rho) * alpha * alpha / 4.0 - log_kfact);
}

double gap_prob_critical(double alpha) {
  if (alpha <= 0.0) throw std::domain_error("alpha must be > 0");
  // Below the switch point the closed form cancels catastrophically; the
  // series 1/2 - a/6 + a^3/180 is beyond double accuracy there.
  if (alpha < 1e-4)
    return 0.5 - alpha / 6.0 + alpha * alpha * alpha / 180.0;
  const double em1 = std::expm1(alpha);  // e^a - 1
  const double num = alpha + (alpha - 1.0) * em1;
  return num / (em1 * em1);
}

double hoeffding_density_bound(double theta, long long n) {
  if (theta < 0.0) throw std::domain_error("theta must be >= 0");
  if (n < 1) throw std::domain_error("n must be >= 1");
  return 2.0 * std::exp(-theta * theta * (double)n);
}

CompTail comp_tail_threshold(long long t, long long s, double eps) {
  if (t < 2) throw std::domain_error("t must be >= 2");
  if (s < 0) throw std::domain_error("s must be >= 0");
  if (eps <= 0.0) throw std::domain_error("eps must be > 0");
  CompTail out;
  out.threshold = (1.0 + eps) * ((double)s / (double)t) * std::log((double)t);
  out.prob_bound = std::pow((double)t, -eps / 2.0);
  return out;
}

double binom_ratio(long long y, long long x, long long delta) {
  if (delta < 0 || x < 0 || x > y - delta)
    throw std::domain_error("need 0 <= x <= y - delta, delta >= 0");
  if (delta == 0) return 1.0;
  // C(y,x)/C(y-d,x) = Gamma(y+1) Gamma(y-d-x+1) / (Gamma(y-x+1) Gamma(y-d+1))
  const double lr = std::lgamma((double)y + 1.0) - std::lgamma((double)(y - x) + 1.0) -
                    std::lgamma((double)(y - delta) + 1.0) +
                    std::lgamma((double)(y - delta - x) + 1.0);
  return std::exp(lr);
}

double prefix_ratio_prediction(double beta) {
  if (beta < 0.0) throw std::domain_error("beta must be >= 0");
  return std::exp(-beta);
}

}  // namespace permlocal::asymptotics
