#include "permlocal/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "permlocal/asymptotics.hpp"
#include "permlocal/qcount.hpp"
#include "permlocal/qcount_approx.hpp"
#include "permlocal/sampler.hpp"
#include "permlocal/stats.hpp"
#include "permlocal/svg.hpp"
#include "permlocal/textio.hpp"

namespace permlocal::cli {

namespace {

using experiments::Row;
using experiments::Spec;

long long triangle(long long j) { return j * (j - 1) / 2; }

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void push_check(VerifyOutcome& out, const std::string& name, bool pass,
                const std::string& detail, std::ostream& progress) {
  out.checks.push_back(CheckLine{name, pass, detail});
  if (!pass) out.ok = false;
  progress << (pass ? "[PASS] " : "[FAIL] ") << name
           << (detail.empty() ? "" : ": " + detail) << "\n";
}

void append_rows(VerifyOutcome& out, const std::vector<Row>& rows) {
  out.rows.insert(out.rows.end(), rows.begin(), rows.end());
}

// Split `samples` across workers with per-worker streams; deterministic for
// a fixed (seed, workers).
template <typename Tally, typename Body>
std::vector<Tally> split_workers(uint64_t seed, int workers, long long samples, Body body) {
  workers = std::max(1, workers);
  std::vector<Tally> tallies((size_t)workers);
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    const long long count = samples / workers + (w < samples % workers ? 1 : 0);
    threads.emplace_back([&, w, count]() {
      RngStream rng(seed, (uint64_t)w);
      body(rng, count, tallies[(size_t)w]);
    });
  }
  for (auto& th : threads) th.join();
  return tallies;
}

// ------------------------------------------------------- suite: identities

void suite_identities(VerifyOutcome& out, std::ostream& progress) {
  bool battery_ok = true;
  std::string battery_note;

  for (int n = 1; n <= 8 && battery_ok; ++n) {
    const long long cap = triangle(n);
    std::vector<long long> census((size_t)cap + 1, 0);
    // pattern_census[m][k][rank], k <= 4; gap_down[m][k]
    const int kmax = std::min(n, 4);
    std::vector<std::vector<std::vector<long long>>> pat(
        (size_t)cap + 1,
        std::vector<std::vector<long long>>((size_t)kmax + 1));
    for (auto& per_m : pat)
      for (int k = 1; k <= kmax; ++k) {
        long long kf = 1;
        for (int i = 2; i <= k; ++i) kf *= i;
        per_m[(size_t)k].assign((size_t)kf, 0);
      }
    std::vector<std::vector<long long>> gap_down((size_t)cap + 1,
                                                 std::vector<long long>((size_t)n, 0));
    std::vector<int> v((size_t)n);
    for (int i = 0; i < n; ++i) v[(size_t)i] = i + 1;
    long long total = 0;
    do {
      long long inv = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (v[(size_t)i] > v[(size_t)j]) ++inv;
      ++census[(size_t)inv];
      ++total;
      Permutation p(v);
      for (int k = 1; k <= kmax; ++k)
        ++pat[(size_t)inv][(size_t)k]
             [(size_t)experiments::pattern_rank(window_pattern(p, 1, k))];
      for (int k = 1; k <= n - 1; ++k)
        if (v[0] > v[(size_t)k]) ++gap_down[(size_t)inv][(size_t)k];
    } while (std::next_permutation(v.begin(), v.end()));

    long long fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    if (total != fact) battery_ok = false;

    BigInt sum_m = 0;
    for (long long m = 0; m <= cap && battery_ok; ++m) {
      const BigInt mah = qcount::mahonian(n, m);
      sum_m += mah;
      if (mah != census[(size_t)m]) {
        battery_ok = false;
        battery_note = "mahonian(" + std::to_string(n) + "," + std::to_string(m) + ")";
        break;
      }
      for (int k = 1; k <= kmax; ++k) {
        for (long long r = 0; r < (long long)pat[(size_t)m][(size_t)k].size(); ++r) {
          const Permutation tau = experiments::pattern_unrank(r, k);
          const BigInt pc = qcount::prefix_count(n, m, k, inv_count(tau));
          if (pc != pat[(size_t)m][(size_t)k][(size_t)r]) {
            battery_ok = false;
            battery_note = "prefix_count(n=" + std::to_string(n) + " m=" +
                           std::to_string(m) + " k=" + std::to_string(k) + ")";
            break;
          }
        }
        if (!battery_ok) break;
      }
      for (int k = 1; k <= n - 1 && battery_ok; ++k) {
        const auto gc = qcount::gap_counts(n, m, k);
        if (gc.down != gap_down[(size_t)m][(size_t)k] ||
            gc.up + gc.down != census[(size_t)m]) {
          battery_ok = false;
          battery_note = "gap_counts(n=" + std::to_string(n) + ")";
        }
      }
      if (battery_ok && census[(size_t)m] > 0 && n >= 2) {
        const auto p21 = qcount::exact_pattern_prob(n, m, parse_permutation("21"));
        if (p21.num * census[(size_t)m] !=
            BigInt(pat[(size_t)m][2][1]) * p21.den) {
          battery_ok = false;
          battery_note = "exact_pattern_prob";
        }
        const auto pg = qcount::exact_gap_prob(n, m, 1);
        if (pg.num * census[(size_t)m] != BigInt(gap_down[(size_t)m][1]) * pg.den) {
          battery_ok = false;
          battery_note = "exact_gap_prob";
        }
      }
    }
    if (battery_ok && sum_m != fact) {
      battery_ok = false;
      battery_note = "sum over m != n!";
    }
  }
  push_check(out, "identities/brute-battery", battery_ok,
             battery_ok ? "exhaustive n<=8 census matches qcount" : battery_note,
             progress);

  // Convolution and gap-sum identities on the n <= 12 grid.
  bool grid_ok = true;
  std::string grid_note;
  for (long long n = 1; n <= 12 && grid_ok; ++n) {
    const long long cap = triangle(n);
    const auto mah_n = qcount::mahonian_row(n, cap);
    for (long long k = 0; k <= n && grid_ok; ++k) {
      const auto mah_k = qcount::mahonian_row(k, triangle(k));
      std::vector<long long> caps;
      for (long long j = k; j < n; ++j) caps.push_back(j);
      const auto suffix = k == n ? qcount::CoefficientVector::unit(cap)
                                 : qcount::capacity_poly(caps, cap);
      for (long long m = 0; m <= cap && grid_ok; ++m) {
        BigInt lhs = 0;
        for (long long ell = 0; ell <= triangle(k); ++ell)
          if (m - ell >= 0) lhs += mah_k[(size_t)ell] * suffix.coeff(m - ell);
        if (lhs != mah_n[(size_t)m]) {
          grid_ok = false;
          grid_note = "convolution n=" + std::to_string(n) + " k=" + std::to_string(k);
        }
        if (m % 5 == 0 && k >= 1 && k <= n && m <= cap) {
          const long long ell = std::min<long long>(triangle(k), m) / 2;
          if (qcount::prefix_count(n, m, k, ell) !=
              (k == n ? BigInt(m == ell ? 1 : 0) : suffix.coeff(m - ell))) {
            grid_ok = false;
            grid_note = "prefix_count spot";
          }
        }
      }
      if (k >= 1 && k <= n - 1 && grid_ok) {
        for (long long m = 0; m <= cap && grid_ok; ++m) {
          const auto gc = qcount::gap_counts(n, m, k);
          if (gc.up + gc.down != mah_n[(size_t)m]) {
            grid_ok = false;
            grid_note = "gap sum n=" + std::to_string(n);
          }
        }
      }
    }
  }
  push_check(out, "identities/grid", grid_ok,
             grid_ok ? "convolution and gap sums exact for n<=12" : grid_note,
             progress);
}

// -------------------------------------------------------- suite: bijection

void suite_bijection(VerifyOutcome& out, std::ostream& progress) {
  const Permutation fig_inv = parse_permutation("735846192");
  const auto code = to_inv_sequence(fig_inv);
  const std::vector<long long> want{0, 1, 1, 0, 3, 2, 6, 0, 7};
  bool ok = code.terms == want && code.sum() == 20 &&
            from_inv_sequence(code) == fig_inv;
  push_check(out, "bijection/inversion-sequence-vector", ok,
             "735846192 <-> 011032607 with sum 20", progress);

  const Permutation fig_psi = parse_permutation("714592683");
  const Permutation shifted = psi_shift(fig_psi);
  const Permutation want_shift = parse_permutation("761349258");
  bool psi_ok = shifted == want_shift && psi_unshift(shifted) == fig_psi;
  const Permutation pat = parse_permutation("2341");
  psi_ok = psi_ok && window_pattern(fig_psi, 3, 4) == pat &&
           window_pattern(shifted, 4, 4) == pat;
  push_check(out, "bijection/shift-vector", psi_ok,
             "shift of 714592683 moves 2341 from position 3 to 4", progress);

  // The shift permutes every inversion class of S_5 and preserves patterns.
  bool cls_ok = true;
  std::vector<int> v{1, 2, 3, 4, 5};
  std::vector<std::vector<long long>> seen((size_t)triangle(5) + 1);
  do {
    Permutation p(v);
    const long long m = inv_count(p);
    const Permutation q = psi_shift(p);
    if (inv_count(q) != m || psi_unshift(q) != p) cls_ok = false;
    seen[(size_t)m].push_back(experiments::pattern_rank(q));
    for (int k = 1; k <= 4 && cls_ok; ++k)
      for (int j = 1; j + k - 1 <= 4; ++j)
        if (window_pattern(q, j + 1, k) != window_pattern(p, j, k)) cls_ok = false;
  } while (std::next_permutation(v.begin(), v.end()));
  for (size_t m = 0; m < seen.size() && cls_ok; ++m) {
    auto& ranks = seen[m];
    std::sort(ranks.begin(), ranks.end());
    if (std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end()) cls_ok = false;
    if ((long long)ranks.size() != qcount::mahonian(5, (long long)m)) cls_ok = false;
  }
  push_check(out, "bijection/shift-classes", cls_ok,
             "shift is an inversion-class bijection on S_5 and moves patterns",
             progress);
}

// ---------------------------------------------------------- suite: sampler

void suite_sampler(VerifyOutcome& out, uint64_t seed, int workers,
                   std::ostream& progress) {
  const long long n = 6, m = 5;
  // class cells indexed by Lehmer rank
  std::vector<int> cell_of_rank((size_t)720, -1);
  std::vector<int> v{1, 2, 3, 4, 5, 6};
  int cells = 0;
  do {
    Permutation p(v);
    if (inv_count(p) == m) cell_of_rank[(size_t)experiments::pattern_rank(p)] = cells++;
  } while (std::next_permutation(v.begin(), v.end()));

  const long long draws = 1'000'000;
  struct Tally {
    std::vector<long long> counts;
  };

  auto run_one = [&](auto& smp, uint64_t seed_offset) {
    auto tallies = split_workers<Tally>(
        seed + seed_offset, workers, draws,
        [&](RngStream& rng, long long count, Tally& tl) {
          tl.counts.assign((size_t)cells, 0);
          for (long long i = 0; i < count; ++i) {
            const Permutation p = smp.sample(rng);
            ++tl.counts[(size_t)cell_of_rank[(size_t)experiments::pattern_rank(p)]];
          }
        });
    std::vector<long long> counts((size_t)cells, 0);
    for (const auto& t : tallies)
      for (int c = 0; c < cells; ++c) counts[(size_t)c] += t.counts[(size_t)c];
    return counts;
  };

  const auto expect = std::vector<double>((size_t)cells, (double)draws / (double)cells);

  sampler::DpSampler dp(n, m);
  const auto dp_counts = run_one(dp, 0);
  const auto dp_cs = stats::chi_square(dp_counts, expect);
  push_check(out, "sampler/dp-uniformity", dp_cs.p_value > 1e-3,
             "chi2=" + fmt(dp_cs.statistic, "%.3f") + " df=" + std::to_string(dp_cs.df) +
                 " p=" + fmt(dp_cs.p_value, "%.5f") + " over " + std::to_string(cells) +
                 " cells",
             progress);

  sampler::TiltedSampler tilted(n, m);
  const auto tl_counts = run_one(tilted, 1);
  const auto tl_cs = stats::chi_square(tl_counts, expect);
  push_check(out, "sampler/tilted-uniformity", tl_cs.p_value > 1e-3,
             "chi2=" + fmt(tl_cs.statistic, "%.3f") + " df=" + std::to_string(tl_cs.df) +
                 " p=" + fmt(tl_cs.p_value, "%.5f"),
             progress);

  // table row n agrees with the direct counts
  bool row_ok = true;
  for (long long s = 0; s <= m; ++s)
    if (dp.table(n, s) != qcount::mahonian(n, s)) row_ok = false;
  push_check(out, "sampler/dp-table-row", row_ok, "row n equals the exact counts",
             progress);
}

// ------------------------------------------------- suites: thm1/thm2/thm5

void suite_thm1(VerifyOutcome& out, uint64_t seed, int workers,
                std::ostream& progress) {
  for (long long k : {2LL, 3LL}) {
    Spec spec;
    spec.kind = experiments::Kind::pattern_census;
    spec.n = 4000;
    spec.m_coeff = 1.0;
    spec.m_power = 1.5;
    spec.k = k;
    spec.samples = 100'000;
    spec.seed = seed + 10 + (uint64_t)k;
    spec.workers = workers;
    spec.sampler_kind = sampler::PermSampler::Kind::dp;
    spec.tol_se = 3.0;
    auto rep = experiments::run_pattern_census(spec);
    bool ok = true;
    double worst = 0.0;
    for (const auto& row : rep.rows) {
      if (row.pass == 0) ok = false;
      if (row.pass >= 0 && row.se > 0)
        worst = std::max(worst, row.deviation / row.se);
    }
    append_rows(out, rep.rows);
    push_check(out,
               "thm1/census-k" + std::to_string(k), ok,
               "n=4000 m=" + std::to_string(spec.resolved_m(4000)) +
                   " max|dev|/se=" + fmt(worst, "%.2f") + " (tol 3)",
               progress);
  }
}

void suite_thm2(VerifyOutcome& out, std::ostream& progress) {
  // Exact two-sided bracket at (400, 4000), k = 2.  The window parameter
  // uses the finite inversion capacity k(k-1)/2, i.e. alpha^2 = k(k-1) n/m.
  const long long n = 400, m = 4000, k = 2;
  const BigInt mah = qcount::mahonian(n, m);
  const BigInt up = 2 * qcount::prefix_count(n, m, k, 0);
  const BigInt dn = 2 * qcount::prefix_count(n, m, k, 1);
  const double a = ratio_big(up, mah);
  const double b = ratio_big(dn, mah);
  const double expo = (double)(k * (k - 1) * n) / (4.0 * (double)m);
  const double hi = std::exp(expo), lo = std::exp(-expo);
  const bool bracket = b < 1.0 && 1.0 < a;
  const double dev_hi = std::abs(a - hi) / hi;
  const double dev_lo = std::abs(b - lo) / lo;
  const bool ok = bracket && dev_hi <= 0.05 && dev_lo <= 0.05;

  Row row;
  row.kind = "thm2_bracket";
  row.label = "k!P(12)";
  row.n = n; row.m = m; row.k = k; row.ell = 0;
  row.estimate = a;
  row.prediction = hi;
  row.deviation = dev_hi;
  row.pass = bracket && dev_hi <= 0.05 ? 1 : 0;
  out.rows.push_back(row);
  row.label = "k!P(21)";
  row.ell = 1;
  row.estimate = b;
  row.prediction = lo;
  row.deviation = dev_lo;
  row.pass = bracket && dev_lo <= 0.05 ? 1 : 0;
  out.rows.push_back(row);

  push_check(out, "thm2/exact-bracket", ok,
             "2P(12)=" + fmt(a, "%.6f") + " 2P(21)=" + fmt(b, "%.6f") +
                 " targets e^±" + fmt(expo, "%.3f") + " (rel dev " +
                 fmt(dev_hi * 100, "%.2f") + "% / " + fmt(dev_lo * 100, "%.2f") + "%)",
             progress);

  // Ratio trend against exp(-beta) along m = 10 n.
  Spec spec;
  spec.kind = experiments::Kind::exact_vs_asym;
  spec.n_grid = {200, 400, 800};
  spec.m_coeff = 10.0;
  spec.m_power = 1.0;
  spec.k = 2;
  spec.beta = std::log(2.0);
  spec.tol_rel = 0.05;
  auto rep = experiments::run_exact_vs_asym(spec);
  bool trend_ok = rep.all_pass();
  for (size_t i = 1; i < rep.rows.size(); ++i)
    if (!(rep.rows[i].deviation < rep.rows[i - 1].deviation)) trend_ok = false;
  append_rows(out, rep.rows);
  push_check(out, "thm2/ratio-trend", trend_ok,
             "deviation from exp(-ln 2) shrinks along n=200,400,800", progress);
}

void suite_thm5(VerifyOutcome& out, uint64_t seed, int workers,
                std::ostream& progress) {
  {
    Spec spec;
    spec.kind = experiments::Kind::gap_sweep;
    spec.n = 3000;
    spec.m = 60'000;
    spec.k_grid = {1, 10, 20, 40, 400};
    spec.samples = 100'000;
    spec.seed = seed + 20;
    spec.workers = workers;
    spec.sampler_kind = sampler::PermSampler::Kind::dp;
    auto rep = experiments::run_gap_sweep(spec);
    append_rows(out, rep.rows);
    bool window_ok = true;
    double k400_est = 1.0;
    std::string detail;
    for (const auto& row : rep.rows) {
      if (row.k == 400) {
        k400_est = row.estimate;
        continue;
      }
      if (row.pass == 0) window_ok = false;
      detail += "k=" + std::to_string(row.k) + ":" +
                fmt(row.se > 0 ? row.deviation / row.se : 0.0, "%.1f") + "se ";
    }
    push_check(out, "thm5/window-sweep", window_ok, detail + "(tol 3se)", progress);
    push_check(out, "thm5/wide-gap", k400_est < 0.05,
               "k=400 estimate " + fmt(k400_est, "%.5f") + " < 0.05", progress);
  }
  {
    Spec spec;
    spec.kind = experiments::Kind::gap_sweep;
    spec.n = 400;
    spec.m = 4000;
    spec.k_grid = {20};
    spec.samples = 100'000;
    spec.seed = seed + 21;
    spec.workers = workers;
    spec.sampler_kind = sampler::PermSampler::Kind::dp;
    auto rep = experiments::run_gap_sweep(spec);
    append_rows(out, rep.rows);
    const auto& row = rep.rows.front();
    push_check(out, "thm5/exact-cross", row.pass == 1,
               "MC " + fmt(row.estimate, "%.5f") + " vs exact " +
                   fmt(row.exact_approx, "%.5f") + " within 3se",
               progress);
  }
  {
    // Scatter-plot scale reproduction: adjacent descents at density 0.01.
    const long long n = 825, m = 3399;
    sampler::TiltedSampler smp(n, m);
    struct Tally {
      double frac_sum = 0.0;
      std::string svg;
    };
    auto tallies = split_workers<Tally>(
        seed + 22, workers, 1000, [&](RngStream& rng, long long count, Tally& tl) {
          for (long long i = 0; i < count; ++i) {
            const Permutation p = smp.sample(rng);
            long long desc = 0;
            for (int j = 1; j < p.size(); ++j)
              if (p(j) > p(j + 1)) ++desc;
            tl.frac_sum += (double)desc / (double)(p.size() - 1);
            if (i == 0 && tl.svg.empty()) tl.svg = svg_plot(p);
          }
        });
    double mean = 0.0;
    for (const auto& t : tallies) mean += t.frac_sum;
    mean /= 1000.0;
    const bool band_ok = mean >= 0.43 && mean <= 0.49;
    const bool svg_ok = !tallies[0].svg.empty() &&
                        tallies[0].svg.find("</svg>") != std::string::npos;
    Row row;
    row.kind = "figure_scale";
    row.label = "adjacent-descents";
    row.n = n; row.m = m; row.k = 1;
    row.samples = 1000;
    row.estimate = mean;
    row.prediction = asymptotics::gap_prob_critical((double)n / (double)m);
    row.deviation = std::abs(mean - row.prediction);
    row.pass = (band_ok && svg_ok) ? 1 : 0;
    row.note = "band [0.43;0.49]";
    out.rows.push_back(row);
    push_check(out, "thm5/figure-scale", band_ok && svg_ok,
               "mean adjacent-descent fraction " + fmt(mean, "%.4f") +
                   " in [0.43,0.49]; svg ok",
               progress);
  }
}

void suite_prop3(VerifyOutcome& out, uint64_t seed, int workers,
                 std::ostream& progress) {
  Spec spec;
  spec.kind = experiments::Kind::tail_weakcomp;
  spec.t = 10'000;
  spec.s = 1'000'000;
  spec.eps = 1.0;
  spec.samples = 1000;
  spec.seed = seed + 30;
  spec.workers = workers;
  auto rep = experiments::run_tail_checks(spec);
  append_rows(out, rep.rows);
  const auto& row = rep.rows.front();
  push_check(out, "prop3/weakcomp-tail", row.pass == 1,
             "exceedance " + fmt(row.estimate, "%.4f") + " <= bound " +
                 fmt(row.prediction, "%.4f") + " + 3se",
             progress);
}

void suite_prop8(VerifyOutcome& out, uint64_t seed, int workers,
                 std::ostream& progress) {
  Spec spec;
  spec.kind = experiments::Kind::tail_density;
  spec.k = 10'000;
  spec.theta = 0.02;
  spec.samples = 100'000;
  spec.seed = seed + 31;
  spec.workers = workers;
  auto rep = experiments::run_tail_checks(spec);
  append_rows(out, rep.rows);
  const auto& row = rep.rows.front();
  push_check(out, "prop8/density-tail", row.pass == 1,
             "exceedance " + fmt(row.estimate, "%.6f") + " <= 2exp(-theta^2 k) = " +
                 fmt(row.prediction, "%.6f"),
             progress);
}

void suite_eq1(VerifyOutcome& out, std::ostream& progress) {
  bool ok = true;
  std::string detail;
  auto run_case = [&](long long n, long long m, long long k, long long ell) {
    Spec spec;
    spec.kind = experiments::Kind::eq1_equivalence;
    spec.n = n;
    spec.m = m;
    spec.k = k;
    spec.ell = ell;
    auto rep = experiments::run_eq1_equivalence(spec);
    append_rows(out, rep.rows);
    if (!rep.all_pass()) {
      ok = false;
      detail = "mismatch at n=" + std::to_string(n);
    }
  };
  run_case(10, 8, 3, 1);
  for (long long n : {5LL, 12LL, 19LL, 26LL, 30LL}) {
    const long long k = std::min<long long>(3, n);
    run_case(n, std::min(triangle(n), 2 * n), k, k >= 2 ? 1 : 0);
  }
  push_check(out, "eq1/tripartition", ok,
             ok ? "recomposition equals the direct count for every split" : detail,
             progress);
}

}  // namespace

std::vector<std::string> verify_suite_names() {
  return {"identities", "bijection", "sampler", "thm1", "thm2",
          "thm5",       "prop3",     "prop8",   "eq1",  "all"};
}

VerifyOutcome run_verify(const VerifyOptions& options, std::ostream& progress) {
  VerifyOutcome out;
  const auto names = verify_suite_names();
  if (std::find(names.begin(), names.end(), options.suite) == names.end())
    throw std::invalid_argument("unknown suite: " + options.suite);
  const bool all = options.suite == "all";
  auto want = [&](const char* name) { return all || options.suite == name; };

  if (want("identities")) suite_identities(out, progress);
  if (want("bijection")) suite_bijection(out, progress);
  if (want("eq1")) suite_eq1(out, progress);
  if (want("sampler")) suite_sampler(out, options.seed, options.workers, progress);
  if (want("thm1")) suite_thm1(out, options.seed, options.workers, progress);
  if (want("thm2")) suite_thm2(out, progress);
  if (want("thm5")) suite_thm5(out, options.seed, options.workers, progress);
  if (want("prop3")) suite_prop3(out, options.seed, options.workers, progress);
  if (want("prop8")) suite_prop8(out, options.seed, options.workers, progress);

  if (!options.out_path.empty()) {
    std::ofstream f(options.out_path);
    if (!f) throw std::runtime_error("cannot open " + options.out_path);
    std::ostringstream meta;
    if (options.format == "jsonl") {
      meta << "\"suite\": \"" << options.suite << "\", \"seed\": " << options.seed
           << ", \"workers\": " << options.workers;
      experiments::write_rows_jsonl(f, meta.str(), out.rows);
    } else {
      meta << "suite=" << options.suite << " seed=" << options.seed
           << " workers=" << options.workers;
      experiments::write_rows_csv(f, meta.str(), out.rows);
    }
  }
  return out;
}

// ------------------------------------------------------------------ run_cli

namespace {

void emit_report(const experiments::Report& rep, const std::string& out_path,
                 const std::string& format, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (format == "jsonl")
      rep.write_jsonl(os);
    else
      rep.write_csv(os);
  };
  if (out_path.empty()) {
    write(out);
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open " + out_path);
    write(f);
  }
}

std::string prob_text(const qcount::ExactProbability& p) {
  return "num=" + p.num.str() + " den=" + p.den.str() + " approx=" + fmt(p.approx);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact counting, uniform sampling and local-statistics checks "
               "for permutations with a fixed number of inversions"};
  app.require_subcommand(1);

  // ---- count
  auto* count = app.add_subcommand("count", "exact counts (decimal)");
  std::string count_kind;
  long long c_n = 0, c_m = 0, c_k = 0, c_l = 0, c_t = 0, c_s = 0, c_r = 0;
  bool c_approx = false;
  count->add_option("kind", count_kind, "mahonian|weakcomp|restricted|suffix|prefix|gap")
      ->required();
  count->add_option("--n", c_n);
  count->add_option("--m", c_m);
  count->add_option("--k", c_k);
  count->add_option("--l,--ell", c_l);
  count->add_option("--t", c_t);
  count->add_option("--s", c_s);
  count->add_option("--r", c_r);
  count->add_flag("--approx", c_approx, "log-space approximation (flagged output)");

  // ---- predict
  auto* predict = app.add_subcommand("predict", "closed-form limit values");
  std::string pr_kind;
  double pr_rho = 0, pr_alpha = 0, pr_theta = 0, pr_eps = 0, pr_beta = 0;
  long long pr_k = 1, pr_n = 1, pr_t = 2, pr_s = 0, pr_y = 0, pr_x = 0, pr_delta = 0;
  bool pr_json = false;
  predict->add_option("kind", pr_kind,
                      "pattern|gap|hoeffding|comptail|binomratio|prefixratio")
      ->required();
  predict->add_option("--rho", pr_rho);
  predict->add_option("--alpha", pr_alpha);
  predict->add_option("--theta", pr_theta);
  predict->add_option("--eps", pr_eps);
  predict->add_option("--beta", pr_beta);
  predict->add_option("--k", pr_k);
  predict->add_option("--n", pr_n);
  predict->add_option("--t", pr_t);
  predict->add_option("--s", pr_s);
  predict->add_option("--y", pr_y);
  predict->add_option("--x", pr_x);
  predict->add_option("--delta", pr_delta);
  predict->add_flag("--json", pr_json);

  // ---- prob
  auto* prob = app.add_subcommand("prob", "pattern / gap probabilities");
  std::string prob_kind, prob_tau;
  long long b_n = 0, b_m = 0, b_k = 0, b_samples = 100'000;
  uint64_t b_seed = 1;
  int b_workers = 2;
  bool b_exact = false, b_mc = false, b_json = false;
  std::string b_sampler = "dp";
  prob->add_option("kind", prob_kind, "pattern|gap")->required();
  prob->add_option("--n", b_n)->required();
  prob->add_option("--m", b_m)->required();
  prob->add_option("--k", b_k);
  prob->add_option("--tau", prob_tau);
  prob->add_flag("--exact", b_exact);
  prob->add_flag("--mc", b_mc);
  prob->add_option("--samples", b_samples);
  prob->add_option("--seed", b_seed);
  prob->add_option("--workers", b_workers);
  prob->add_option("--sampler", b_sampler);
  prob->add_flag("--json", b_json);

  // ---- sample
  auto* sample = app.add_subcommand("sample", "draw uniform permutations");
  long long s_n = 0, s_m = 0, s_count = 1;
  uint64_t s_seed = 1;
  long long s_streams = 1;
  std::string s_sampler = "dp", s_format = "text", s_out;
  sample->add_option("--n", s_n)->required();
  sample->add_option("--m", s_m)->required();
  sample->add_option("--count", s_count);
  sample->add_option("--seed", s_seed);
  sample->add_option("--streams", s_streams);
  sample->add_option("--sampler", s_sampler, "dp|tilted");
  sample->add_option("--format", s_format, "text|csv|json|svg");
  sample->add_option("--out", s_out);

  // ---- sweep
  auto* sweep = app.add_subcommand("sweep", "run a declarative experiment");
  std::string w_spec_path, w_out, w_format = "csv";
  std::vector<std::string> w_set;
  sweep->add_option("--spec", w_spec_path, "key=value config file");
  sweep->add_option("--set", w_set, "extra key=value pairs (repeatable)");
  sweep->add_option("--out", w_out);
  sweep->add_option("--format", w_format, "csv|jsonl");

  // ---- verify
  auto* verify = app.add_subcommand("verify", "desk-scale verification suites");
  VerifyOptions vopt;
  verify->add_option("--suite", vopt.suite, "identities|bijection|sampler|thm1|thm2|thm5|prop3|prop8|eq1|all");
  verify->add_option("--seed", vopt.seed);
  verify->add_option("--workers", vopt.workers);
  verify->add_option("--out", vopt.out_path);
  verify->add_option("--format", vopt.format, "csv|jsonl");

  // ---- plot
  auto* plot = app.add_subcommand("plot", "SVG scatter plot of a permutation");
  std::string p_perm, p_in, p_out;
  plot->add_option("--perm", p_perm, "permutation text");
  plot->add_option("--in", p_in, "file with one permutation per line (first used)");
  plot->add_option("--out", p_out);

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  storage.insert(storage.begin(), "permlocal");
  argv.reserve(storage.size());
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse((int)argv.size(), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(count)) {
      using namespace qcount;
      if (c_approx) {
        double lv;
        if (count_kind == "mahonian") lv = approx_log_mahonian(c_n, c_m);
        else if (count_kind == "prefix") lv = approx_log_prefix_count(c_n, c_m, c_k, c_l);
        else throw std::invalid_argument("--approx supports mahonian and prefix");
        out << "approx " << fmt(std::exp(lv), "%.9e") << " log=" << fmt(lv) << "\n";
        return 0;
      }
      if (count_kind == "mahonian") out << mahonian(c_n, c_m).str() << "\n";
      else if (count_kind == "weakcomp") out << weak_comp_count(c_t, c_s).str() << "\n";
      else if (count_kind == "restricted")
        out << restricted_comp_count(c_t, c_s, c_r).str() << "\n";
      else if (count_kind == "suffix") out << inv_suffix_count(c_t, c_s, c_r).str() << "\n";
      else if (count_kind == "prefix") out << prefix_count(c_n, c_m, c_k, c_l).str() << "\n";
      else if (count_kind == "gap") {
        auto gc = gap_counts(c_n, c_m, c_k);
        out << gc.up.str() << " " << gc.down.str() << "\n";
      } else {
        err << "error: unknown count kind: " << count_kind << "\n";
        return 2;
      }
      return 0;
    }

    if (app.got_subcommand(predict)) {
      double value;
      if (pr_kind == "pattern")
        value = asymptotics::pattern_prob_critical(pr_rho, pr_alpha, pr_k);
      else if (pr_kind == "gap")
        value = asymptotics::gap_prob_critical(pr_alpha);
      else if (pr_kind == "hoeffding")
        value = asymptotics::hoeffding_density_bound(pr_theta, pr_n);
      else if (pr_kind == "comptail") {
        auto ct = asymptotics::comp_tail_threshold(pr_t, pr_s, pr_eps);
        if (pr_json)
          out << "{\"threshold\": " << fmt(ct.threshold)
              << ", \"prob_bound\": " << fmt(ct.prob_bound) << "}\n";
        else
          out << fmt(ct.threshold) << " " << fmt(ct.prob_bound) << "\n";
        return 0;
      } else if (pr_kind == "binomratio")
        value = asymptotics::binom_ratio(pr_y, pr_x, pr_delta);
      else if (pr_kind == "prefixratio")
        value = asymptotics::prefix_ratio_prediction(pr_beta);
      else {
        err << "error: unknown predict kind: " << pr_kind << "\n";
        return 2;
      }
      if (pr_json)
        out << "{\"value\": " << fmt(value) << "}\n";
      else
        out << fmt(value) << "\n";
      return 0;
    }

    if (app.got_subcommand(prob)) {
      if (b_exact == b_mc)
        throw std::invalid_argument("choose exactly one of --exact / --mc");
      if (prob_kind == "pattern") {
        if (prob_tau.empty()) throw std::invalid_argument("--tau required");
        const Permutation tau = parse_permutation(prob_tau);
        if (b_exact) {
          auto p = qcount::exact_pattern_prob(b_n, b_m, tau);
          out << (b_json ? p.json() : prob_text(p)) << "\n";
          return 0;
        }
        Spec spec;
        spec.kind = experiments::Kind::pattern_census;
        spec.n = b_n;
        spec.m = b_m;
        spec.tau = prob_tau;
        spec.samples = b_samples;
        spec.seed = b_seed;
        spec.workers = b_workers;
        spec.sampler_kind = sampler::sampler_kind_from_string(b_sampler);
        auto rep = experiments::run_pattern_census(spec);
        const auto& row = rep.rows.front();
        out << "estimate=" << fmt(row.estimate) << " se=" << fmt(row.se)
            << " ci95=[" << fmt(row.ci_low) << "," << fmt(row.ci_high) << "]"
            << " samples=" << row.samples << "\n";
        return 0;
      }
      if (prob_kind == "gap") {
        if (b_exact) {
          auto p = qcount::exact_gap_prob(b_n, b_m, b_k);
          out << (b_json ? p.json() : prob_text(p)) << "\n";
          return 0;
        }
        Spec spec;
        spec.kind = experiments::Kind::gap_sweep;
        spec.n = b_n;
        spec.m = b_m;
        spec.k_grid = {b_k};
        spec.samples = b_samples;
        spec.seed = b_seed;
        spec.workers = b_workers;
        spec.sampler_kind = sampler::sampler_kind_from_string(b_sampler);
        auto rep = experiments::run_gap_sweep(spec);
        const auto& row = rep.rows.front();
        out << "estimate=" << fmt(row.estimate) << " se=" << fmt(row.se)
            << " ci95=[" << fmt(row.ci_low) << "," << fmt(row.ci_high) << "]"
            << " samples=" << row.samples << "\n";
        return 0;
      }
      err << "error: unknown prob kind: " << prob_kind << "\n";
      return 2;
    }

    if (app.got_subcommand(sample)) {
      const auto kind = sampler::sampler_kind_from_string(s_sampler);
      sampler::PermSampler smp(kind, s_n, s_m);
      if (s_streams < 1) throw std::invalid_argument("streams must be >= 1");
      std::ostringstream buf;
      std::vector<Permutation> first;
      for (long long w = 0; w < s_streams; ++w) {
        RngStream rng(s_seed, (uint64_t)w);
        const long long cnt = s_count / s_streams + (w < s_count % s_streams ? 1 : 0);
        for (long long i = 0; i < cnt; ++i) {
          const Permutation p = smp.sample(rng);
          if (first.empty()) first.push_back(p);
          if (s_format == "json") {
            buf << (buf.tellp() > 0 ? ",\n" : "[\n") << "[";
            for (int j = 1; j <= p.size(); ++j)
              buf << (j > 1 ? "," : "") << p(j);
            buf << "]";
          } else if (s_format == "csv") {
            buf << format_permutation(p, ',') << "\n";
          } else if (s_format == "text") {
            buf << format_permutation(p) << "\n";
          }
        }
      }
      std::string payload;
      if (s_format == "svg") {
        if (first.empty()) throw std::invalid_argument("count must be >= 1");
        payload = svg_plot(first.front());
      } else if (s_format == "json") {
        payload = buf.str() + "\n]\n";
      } else {
        payload = buf.str();
      }
      if (s_out.empty()) {
        out << payload;
      } else {
        std::ofstream f(s_out);
        if (!f) throw std::runtime_error("cannot open " + s_out);
        f << payload;
      }
      if (smp.approximate())
        err << "note: sampler '" << smp.label() << "' is approximate-uniform\n";
      return 0;
    }

    if (app.got_subcommand(sweep)) {
      std::vector<std::pair<std::string, std::string>> kv;
      if (!w_spec_path.empty()) kv = experiments::read_kv_file(w_spec_path);
      for (const auto& item : w_set) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
          throw std::invalid_argument("--set wants key=value, got: " + item);
        kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
      }
      if (kv.empty()) throw std::invalid_argument("give --spec and/or --set");
      Spec spec = Spec::from_kv(kv);
      auto rep = experiments::run_experiment(spec);
      emit_report(rep, w_out, w_format, out);
      if (rep.approximate_sampler)
        err << "note: sampler '" << rep.sampler_label << "' is approximate-uniform\n";
      return rep.all_pass() ? 0 : 1;
    }

    if (app.got_subcommand(verify)) {
      auto outcome = run_verify(vopt, out);
      out << (outcome.ok ? "ALL PASS" : "FAILURES PRESENT") << "\n";
      return outcome.ok ? 0 : 1;
    }

    if (app.got_subcommand(plot)) {
      std::string text = p_perm;
      if (text.empty() && !p_in.empty()) {
        std::ifstream f(p_in);
        if (!f) throw std::runtime_error("cannot open " + p_in);
        std::getline(f, text);
      }
      if (text.empty()) throw std::invalid_argument("give --perm or --in");
      const std::string svg = svg_plot(parse_permutation(text));
      if (p_out.empty()) {
        out << svg;
      } else {
        std::ofstream f(p_out);
        if (!f) throw std::runtime_error("cannot open " + p_out);
        f << svg;
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace permlocal::cli
