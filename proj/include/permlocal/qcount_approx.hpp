#pragma once

#include <vector>

#include "permlocal/qcount.hpp"

namespace permlocal::qcount {

// Floating companion to capacity_poly for box systems past the exact cell
// budget.  Rows are kept as exponentially tilted probabilities (tilt chosen
// to centre the target total), which keeps every quantity near the target
// inside double range; natural-log coefficients are recovered on demand.
// Outputs are approximate: relative error is at accumulated-rounding scale
// near the target and the row underflows to -inf far away from it.
class TiltedCoeffRow {
 public:
  TiltedCoeffRow(const std::vector<long long>& capacities, long long max_degree,
                 long long target);

  // ln coeff(s); -inf if s is infeasible or beyond the tilted window.
  double log_coeff(long long s) const;

  double tilt() const { return q_; }
  long long max_degree() const { return (long long)probs_.size() - 1; }

  // Tilted probability of total s (normalized within the row), and the
  // log-normalization such that ln coeff(s) = ln prob(s) + lognorm - s ln q.
  double prob(long long s) const;
  double log_norm() const { return lognorm_; }
  double log_q() const { return logq_; }

 private:
  double q_;
  double logq_;
  double lognorm_;
  bool reflected_;
  long long total_capacity_;
  std::vector<double> probs_;
};

// Tilt solving: q in (0,1] with the summed tilted box means equal to the
// target; requires 2*target <= sum of capacities (reflect first otherwise).
double solve_box_tilt(const std::vector<long long>& capacities, double target);

// Mean and variance of the tilted distribution on {0..count-1} with weight
// q^v.  Continuous at q = 1 where they are the uniform moments.
double tilted_mean(double q, long long count);
double tilted_var(double q, long long count);

double approx_log_mahonian(long long n, long long m);
double approx_log_prefix_count(long long n, long long m, long long k, long long ell);

// Approximate analogue of exact_gap_prob / exact_pattern_prob.
double approx_gap_prob(long long n, long long m, long long k);
double approx_pattern_prob(long long n, long long m, long long k, long long ell);

}  // namespace permlocal::qcount
