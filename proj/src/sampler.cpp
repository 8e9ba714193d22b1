#include "permlocal/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "permlocal/qcount_approx.hpp"

namespace permlocal::sampler {

namespace {

long long triangle(long long j) { return j * (j - 1) / 2; }

// Complement each entry within its box: v -> j-1-v.  Maps a code with sum s
// to one with sum C(n,2)-s, matching value complementation n+1-v.
void reflect_code(InversionSequence& code) {
  for (size_t j = 0; j < code.terms.size(); ++j)
    code.terms[j] = (long long)j - code.terms[j];
}

// Truncated tilted draw on {0..count-1}: a geometric folded mod count keeps
// the q^v weights exactly.
inline long long tilted_draw(RngStream& rng, long long count, double inv_logq) {
  double u;
  do {
    u = rng.next_double();
  } while (u <= 0.0);
  const long long g = (long long)(std::log(u) * inv_logq);
  return g % count;
}

}  // namespace

TiltParams solve_tilt(long long n, long long m) {
  const long long cap = triangle(n);
  if (m <= 0 || m >= cap) throw std::domain_error("solve_tilt needs 0 < m < C(n,2)");
  TiltParams tp;
  tp.reflected = 2 * m > cap;
  const long long target = tp.reflected ? cap - m : m;
  tp.target_mean = (double)target;
  if (2 * target == cap) {
    tp.q = 1.0;
    tp.residual = 0.0;
    return tp;
  }
  auto mean_total = [&](double q) {
    double t = 0.0;
    for (long long j = 1; j <= n; ++j) t += qcount::tilted_mean(q, j);
    return t;
  };
  double lo = 0.0, hi = 1.0;
  const double tol = 1e-9 * std::max(1.0, (double)target);
  double mid = 0.5, achieved = 0.0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    achieved = mean_total(mid);
    if (std::abs(achieved - (double)target) <= tol) break;
    if (achieved < (double)target)
      lo = mid;
    else
      hi = mid;
  }
  tp.q = mid;
  tp.residual = achieved - (double)target;
  return tp;
}

// ---------------------------------------------------------------- DpSampler

DpSampler::DpSampler(long long n, long long m) : n_(n), m_(m) {
  if (n < 0 || m < 0 || m > triangle(n)) throw std::domain_error("bad (n, m)");
  if (!qcount::within_exact_budget(n, m))
    throw std::domain_error("n*(m+1) beyond the exact cell budget");
  rows_.resize((size_t)n + 1);
  rows_[0] = {BigInt(1)};
  for (long long j = 1; j <= n; ++j) {
    const long long deg = std::min(m, triangle(j));
    const auto& prev = rows_[(size_t)j - 1];
    const long long prev_deg = (long long)prev.size() - 1;
    std::vector<BigInt> row((size_t)deg + 1);
    BigInt run(0);
    for (long long s = 0; s <= deg; ++s) {
      if (s <= prev_deg) run += prev[(size_t)s];
      if (s - j >= 0 && s - j <= prev_deg) run -= prev[(size_t)(s - j)];
      row[(size_t)s] = run;
    }
    rows_[(size_t)j] = std::move(row);
  }
  if (table(n, m) == 0) throw std::domain_error("empty class S_{n,m}");
}

const BigInt& DpSampler::table(long long j, long long s) const {
  static const BigInt zero{0};
  if (j < 0 || j > n_ || s < 0) return zero;
  const auto& row = rows_[(size_t)j];
  if (s >= (long long)row.size()) return zero;
  return row[(size_t)s];
}

InversionSequence DpSampler::sample_code(RngStream& rng) const {
  InversionSequence code;
  code.terms.assign((size_t)n_, 0);
  long long s = m_;
  for (long long j = n_; j >= 1; --j) {
    if (s == 0) break;  // everything left is forced to zero
    const BigInt& total = table(j, s);
    BigInt r = rng.uniform_below_big(total);
    const long long v_lo = std::max<long long>(0, s - triangle(j - 1));
    const long long v_hi = std::min(j - 1, s);
    BigInt acc(0);
    long long v = v_lo;
    for (; v <= v_hi; ++v) {
      acc += table(j - 1, s - v);
      if (acc > r) break;
    }
    code.terms[(size_t)j - 1] = v;
    s -= v;
  }
  return code;
}

Permutation DpSampler::sample(RngStream& rng) const {
  return from_inv_sequence(sample_code(rng));
}

// ------------------------------------------------------------ TiltedSampler

TiltedSampler::TiltedSampler(long long n, long long m, long long max_trials)
    : n_(n), m_(m) {
  const long long cap = triangle(n);
  if (m < 0 || m > cap) throw std::domain_error("bad (n, m)");
  if (m == 0 || m == cap) {
    // single-element classes; accepted on the first trial
    target_ = 2 * m > cap ? 0 : m;
    tilt_.q = 1e-12;
    tilt_.reflected = 2 * m > cap;
    tilt_.target_mean = 0.0;
    inv_logq_ = 0.0;
    sigma_ = 0.0;
    max_trials_ = std::max<long long>(1, max_trials);
    return;
  }
  tilt_ = solve_tilt(n, m);
  target_ = (long long)tilt_.target_mean;
  inv_logq_ = tilt_.q < 1.0 ? 1.0 / std::log(tilt_.q) : 0.0;
  double var = 0.0;
  for (long long j = 1; j <= n; ++j) var += qcount::tilted_var(tilt_.q, j);
  sigma_ = std::sqrt(var);
  max_trials_ =
      max_trials > 0
          ? max_trials
          : std::max<long long>(1'000'000, (long long)(200.0 * expected_trials()));
}

double TiltedSampler::expected_trials() const {
  return std::max(1.0, sigma_ * std::sqrt(2.0 * M_PI));
}

InversionSequence TiltedSampler::sample_code(RngStream& rng, long long* trials_out) const {
  InversionSequence code;
  code.terms.assign((size_t)n_, 0);
  const bool uniform_boxes = tilt_.q >= 1.0;
  for (long long trial = 1; trial <= max_trials_; ++trial) {
    long long total = 0;
    bool over = false;
    for (long long j = 2; j <= n_; ++j) {
      const long long e =
          uniform_boxes ? (long long)rng.uniform_below((uint64_t)j)
                        : tilted_draw(rng, j, inv_logq_);
      code.terms[(size_t)j - 1] = e;
      total += e;
      if (total > target_) {
        over = true;
        break;
      }
    }
    if (over || total != target_) continue;
    if (tilt_.reflected) reflect_code(code);
    if (trials_out) *trials_out = trial;
    return code;
  }
  throw TrialsExhausted(max_trials_);
}

Permutation TiltedSampler::sample(RngStream& rng) const {
  return from_inv_sequence(sample_code(rng));
}

// --------------------------------------------------------- HybridDpSampler

HybridDpSampler::HybridDpSampler(long long n, long long m, long long prefix_limit)
    : n_(n), m_(m) {
  const long long cap = triangle(n);
  if (m < 0 || m > cap) throw std::domain_error("bad (n, m)");
  reflected_ = 2 * m > cap;
  target_ = reflected_ ? cap - m : m;

  if (target_ == 0 || n < 3) {
    q_ = 1e-12;
  } else if (2 * target_ == cap) {
    q_ = 1.0;
  } else {
    TiltParams tp = solve_tilt(n, reflected_ ? cap - m : m);
    q_ = tp.q;
  }
  logq_ = q_ < 1.0 ? std::log(q_) : 0.0;
  inv_logq_ = q_ < 1.0 ? 1.0 / logq_ : 0.0;

  // Prefix of the variance: large enough for a healthy acceptance rate,
  // small enough that the stored rows stay modest.
  double var_total = 0.0;
  for (long long j = 1; j <= n; ++j) var_total += qcount::tilted_var(q_, j);
  double var_run = 0.0;
  long long j0 = n;
  for (long long j = 1; j <= n; ++j) {
    var_run += qcount::tilted_var(q_, j);
    if (var_run >= var_total / 16.0) {
      j0 = j;
      break;
    }
  }
  j0_ = std::clamp<long long>(j0, std::min<long long>(64, n), std::min(n, prefix_limit));
  prefix_cap_ = triangle(j0_);

  const long long deg = std::min(prefix_cap_, target_);
  prows_.resize((size_t)j0_ + 1);
  prows_[0] = {1.0};
  std::vector<double> scratch((size_t)deg + 1);
  for (long long j = 1; j <= j0_; ++j) {
    const long long rdeg = std::min(deg, triangle(j));
    const auto& prev = prows_[(size_t)j - 1];
    const long long prev_deg = (long long)prev.size() - 1;
    std::vector<double> row((size_t)rdeg + 1, 0.0);
    // S(s) = prev(s) + q S(s-1); row(s) = S(s) - q^j S(s-j), box capacity j-1.
    const double qj = std::exp((double)j * logq_);
    double run = 0.0;
    for (long long s = 0; s <= rdeg; ++s) {
      run = (s <= prev_deg ? prev[(size_t)s] : 0.0) + q_ * run;
      scratch[(size_t)s] = run;
    }
    for (long long s = rdeg; s >= 0; --s) {
      double v = scratch[(size_t)s];
      if (s - j >= 0) v -= qj * scratch[(size_t)(s - j)];
      row[(size_t)s] = v > 0.0 ? v : 0.0;
    }
    const double mx = *std::max_element(row.begin(), row.end());
    if (!(mx > 0.0)) throw std::runtime_error("hybrid prefix row vanished");
    for (double& v : row) v /= mx;
    prows_[(size_t)j] = std::move(row);
  }

  qpow_.resize((size_t)j0_ + 1);
  for (long long v = 0; v <= j0_; ++v) qpow_[(size_t)v] = std::exp((double)v * logq_);

  accept_max_ = *std::max_element(prows_[(size_t)j0_].begin(), prows_[(size_t)j0_].end());
  max_trials_ = 1'000'000;
}

InversionSequence HybridDpSampler::sample_code(RngStream& rng, long long* trials_out) const {
  InversionSequence code;
  code.terms.assign((size_t)n_, 0);
  const auto& accept_row = prows_[(size_t)j0_];
  const bool uniform_boxes = q_ >= 1.0;
  std::vector<double> w((size_t)j0_ + 1);

  for (long long trial = 1; trial <= max_trials_; ++trial) {
    long long suffix_total = 0;
    bool over = false;
    for (long long j = j0_ + 1; j <= n_; ++j) {
      const long long e =
          uniform_boxes ? (long long)rng.uniform_below((uint64_t)j)
                        : tilted_draw(rng, j, inv_logq_);
      code.terms[(size_t)j - 1] = e;
      suffix_total += e;
      if (suffix_total > target_) {
        over = true;
        break;
      }
    }
    if (over) continue;
    const long long s_pre = target_ - suffix_total;
    if (s_pre >= (long long)accept_row.size()) continue;
    const double a = accept_row[(size_t)s_pre] / accept_max_;
    if (a <= 0.0 || rng.next_double() >= a) continue;

    // Backward pass over the prefix rows.
    long long s = s_pre;
    bool ok = true;
    for (long long j = j0_; j >= 1 && ok; --j) {
      const auto& prev = prows_[(size_t)j - 1];
      const long long prev_deg = (long long)prev.size() - 1;
      const long long v_lo = std::max<long long>(0, s - prev_deg);
      const long long v_hi = std::min(j - 1, s);
      double z = 0.0;
      for (long long v = v_lo; v <= v_hi; ++v) {
        const double wv = qpow_[(size_t)v] * prev[(size_t)(s - v)];
        w[(size_t)v] = wv;
        z += wv;
      }
      if (!(z > 0.0)) {
        ok = false;
        break;
      }
      const double r = rng.next_double() * z;
      double acc = 0.0;
      long long v = v_lo;
      for (; v < v_hi; ++v) {
        acc += w[(size_t)v];
        if (acc > r) break;
      }
      code.terms[(size_t)j - 1] = v;
      s -= v;
    }
    if (!ok || s != 0) continue;
    if (reflected_) reflect_code(code);
    if (trials_out) *trials_out = trial;
    return code;
  }
  throw TrialsExhausted(max_trials_);
}

Permutation HybridDpSampler::sample(RngStream& rng) const {
  return from_inv_sequence(sample_code(rng));
}

// -------------------------------------------------------------- PermSampler

PermSampler::PermSampler(Kind kind, long long n, long long m) {
  if (kind == Kind::tilted) {
    tilted_ = std::make_unique<TiltedSampler>(n, m);
    label_ = "tilted";
  } else if (qcount::within_exact_budget(n, m)) {
    dp_ = std::make_unique<DpSampler>(n, m);
    label_ = "dp";
  } else {
    hybrid_ = std::make_unique<HybridDpSampler>(n, m);
    label_ = "dp-hybrid";
  }
}

InversionSequence PermSampler::sample_code(RngStream& rng) const {
  if (dp_) return dp_->sample_code(rng);
  if (tilted_) return tilted_->sample_code(rng);
  return hybrid_->sample_code(rng);
}

Permutation PermSampler::sample(RngStream& rng) const {
  return from_inv_sequence(sample_code(rng));
}

PermSampler::Kind sampler_kind_from_string(const std::string& s) {
  if (s == "dp") return PermSampler::Kind::dp;
  if (s == "tilted") return PermSampler::Kind::tilted;
  throw std::invalid_argument("unknown sampler: " + s);
}

Permutation sample_perm_dp(long long n, long long m, RngStream& rng) {
  return DpSampler(n, m).sample(rng);
}

Permutation sample_perm_tilted(long long n, long long m, RngStream& rng) {
  return TiltedSampler(n, m).sample(rng);
}

std::vector<long long> sample_weak_composition(long long t, long long s, RngStream& rng) {
  if (t < 1) throw std::domain_error("need t >= 1");
  std::vector<long long> comp((size_t)t, 0);
  if (s == 0 || t == 1) {
    comp[0] = s;
    return comp;
  }
  // Floyd's subset sampling of t-1 bar positions out of s+t-1.
  const long long universe = s + t - 1;
  const long long bars = t - 1;
  std::unordered_set<long long> chosen;
  chosen.reserve((size_t)bars * 2);
  for (long long j = universe - bars + 1; j <= universe; ++j) {
    const long long r = (long long)rng.uniform_below((uint64_t)j) + 1;
    if (!chosen.insert(r).second) chosen.insert(j);
  }
  std::vector<long long> pos(chosen.begin(), chosen.end());
  std::sort(pos.begin(), pos.end());
  long long prev = 0;
  for (long long i = 0; i < bars; ++i) {
    comp[(size_t)i] = pos[(size_t)i] - prev - 1;
    prev = pos[(size_t)i];
  }
  comp[(size_t)bars] = universe - prev;
  return comp;
}

long long round_half_even(double x) {
  const double f = std::floor(x);
  const double frac = x - f;
  const long long base = (long long)f;
  if (frac > 0.5) return base + 1;
  if (frac < 0.5) return base;
  return base % 2 == 0 ? base : base + 1;
}

Permutation sample_pattern_with_density(long long k, double rho, RngStream& rng) {
  if (k < 1) throw std::domain_error("k must be >= 1");
  if (rho < 0.0 || rho > 1.0) throw std::domain_error("rho must be in [0,1]");
  const long long ell = round_half_even(rho * (double)triangle(k));
  if (ell == 0) return Permutation::identity((int)k);
  if (ell == triangle(k)) return Permutation::reversed((int)k);
  PermSampler s(PermSampler::Kind::dp, k, ell);
  return s.sample(rng);
}

}  // namespace permlocal::sampler
