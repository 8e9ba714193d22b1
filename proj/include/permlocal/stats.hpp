#pragma once

#include <cmath>
#include <vector>

namespace permlocal::stats {

// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double gamma_q(double a, double x);

// Inverse standard normal CDF.
double inverse_normal_cdf(double p);

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  long long df = 0;
  bool merged_cells = false;  // zero-expected cells were pooled
};

// Goodness of fit of observed counts against expected cell values.
ChiSquareResult chi_square(const std::vector<long long>& counts,
                           const std::vector<double>& expected);

// Homogeneity of two count vectors over the same cells.
ChiSquareResult chi_square_two_sample(const std::vector<long long>& a,
                                      const std::vector<long long>& b);

// Half the L1 distance between two distributions.
double tv_distance(const std::vector<double>& a, const std::vector<double>& b);

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

Interval wilson_ci(long long successes, long long trials, double level);

inline double binomial_se(double p_hat, long long trials) {
  if (trials <= 0) return 0.0;
  double v = p_hat * (1.0 - p_hat) / (double)trials;
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

}  // namespace permlocal::stats
