#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "permlocal/bigint.hpp"
#include "permlocal/permutation.hpp"
#include "permlocal/qcount.hpp"
#include "permlocal/rng.hpp"

namespace permlocal::sampler {

// Tilt weight q chosen so the summed box means hit the target inversion
// count.  Classes with m above half capacity are handled by sampling the
// complementary count and reflecting the code, so q stays in (0,1]; the
// reflected flag records that, and target_mean is the count actually
// matched (min(m, C(n,2)-m)).
struct TiltParams {
  double q = 1.0;
  double target_mean = 0.0;
  double residual = 0.0;
  bool reflected = false;
};

TiltParams solve_tilt(long long n, long long m);

struct TrialsExhausted : std::runtime_error {
  long long trials;
  explicit TrialsExhausted(long long t)
      : std::runtime_error("rejection budget exhausted after " +
                           std::to_string(t) + " trials"),
        trials(t) {}
};

// Exactly uniform backward sampler over the inversion-count table, kept in
// exact big integers.  Needs n*(m+1) within the exact cell budget.
class DpSampler {
 public:
  DpSampler(long long n, long long m);

  InversionSequence sample_code(RngStream& rng) const;
  Permutation sample(RngStream& rng) const;

  long long n() const { return n_; }
  long long m() const { return m_; }
  // T(j, s): fillings of the first j boxes with s balls (s <= m).
  const BigInt& table(long long j, long long s) const;

 private:
  long long n_, m_;
  std::vector<std::vector<BigInt>> rows_;
};

// Exactly uniform rejection sampler: every code entry is drawn from the
// q-tilted distribution on its box and the vector is kept only when the
// total hits the target, which leaves the conditional law uniform.
class TiltedSampler {
 public:
  TiltedSampler(long long n, long long m, long long max_trials = 0);

  InversionSequence sample_code(RngStream& rng, long long* trials_out = nullptr) const;
  Permutation sample(RngStream& rng) const;

  const TiltParams& tilt() const { return tilt_; }
  double sigma() const { return sigma_; }
  // Local-CLT estimate sigma * sqrt(2 pi) of trials per acceptance.
  double expected_trials() const;
  long long max_trials() const { return max_trials_; }

 private:
  long long n_, m_, target_;
  TiltParams tilt_;
  double inv_logq_;
  double sigma_;
  long long max_trials_;
};

// Scalable variant for jobs past the exact cell budget: boxes above a small
// prefix are drawn tilted, the prefix is filled by a backward pass over
// tilted floating-point rows, and a scalar rejection on the prefix total
// makes the two parts consistent.  Approximate-uniform: the bias is bounded
// by accumulated double rounding in the prefix rows (not certified).
class HybridDpSampler {
 public:
  HybridDpSampler(long long n, long long m, long long prefix_limit = 512);

  InversionSequence sample_code(RngStream& rng, long long* trials_out = nullptr) const;
  Permutation sample(RngStream& rng) const;

  long long prefix_size() const { return j0_; }
  double tilt() const { return q_; }

 private:
  long long n_, m_, target_;
  bool reflected_;
  double q_, logq_, inv_logq_;
  long long j0_;
  long long prefix_cap_;                    // total capacity of the prefix boxes
  std::vector<std::vector<double>> prows_;  // tilted prefix rows, renormalized
  std::vector<double> qpow_;
  double accept_max_;
  long long max_trials_;
};

// dp resolves to the exact table sampler within budget and to the hybrid
// beyond it; tilted is the pure rejection sampler at any scale.
class PermSampler {
 public:
  enum class Kind { dp, tilted };

  PermSampler(Kind kind, long long n, long long m);

  InversionSequence sample_code(RngStream& rng) const;
  Permutation sample(RngStream& rng) const;

  bool approximate() const { return hybrid_ != nullptr; }
  const std::string& label() const { return label_; }

 private:
  std::unique_ptr<DpSampler> dp_;
  std::unique_ptr<TiltedSampler> tilted_;
  std::unique_ptr<HybridDpSampler> hybrid_;
  std::string label_;
};

PermSampler::Kind sampler_kind_from_string(const std::string& s);

// One-shot conveniences; hot loops should hold a sampler object instead.
Permutation sample_perm_dp(long long n, long long m, RngStream& rng);
Permutation sample_perm_tilted(long long n, long long m, RngStream& rng);

// Uniform weak t-composition of s via a uniform bar subset.
std::vector<long long> sample_weak_composition(long long t, long long s, RngStream& rng);

// Uniform k-pattern with round(rho * C(k,2)) inversions (half rounds to even).
Permutation sample_pattern_with_density(long long k, double rho, RngStream& rng);

long long round_half_even(double x);

}  // namespace permlocal::sampler
