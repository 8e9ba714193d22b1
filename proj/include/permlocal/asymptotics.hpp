#pragma once

namespace permlocal::asymptotics {

// Limit probability that a k-window of inversion density rho occurs, at
// window scale alpha (k ~ alpha * sqrt(m/n)):  exp((1-2 rho) alpha^2 / 4) / k!.
// k! goes through lgamma, so k can be large.
double pattern_prob_critical(double rho, double alpha, long long k);

// Limit probability that positions j, j+k form an inversion at gap scale
// alpha (k ~ alpha * m/n):  (e^a (a-1) + 1) / (e^a - 1)^2.  Strictly below
// 1/2, decreasing, -> 1/2 as alpha -> 0.
double gap_prob_critical(double alpha);

// Tail bound 2 exp(-theta^2 n) for |dinv - 1/2| > theta over uniform S_n.
double hoeffding_density_bound(double theta, long long n);

struct CompTail {
  double threshold;   // (1+eps)(s/t) ln t
  double prob_bound;  // t^(-eps/2)
};
CompTail comp_tail_threshold(long long t, long long s, double eps);

// C(y, x) / C(y - delta, x), evaluated in log space.
double binom_ratio(long long y, long long x, long long delta);

// Prefix-count ratio limit exp(-beta) when ell ~ beta m/n.
double prefix_ratio_prediction(double beta);

}  // namespace permlocal::asymptotics
