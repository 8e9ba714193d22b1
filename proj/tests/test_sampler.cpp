#include <doctest.h>

#include <cmath>
#include <map>

#include "oracle.hpp"
#include "permlocal/qcount.hpp"
#include "permlocal/qcount_approx.hpp"
#include "permlocal/sampler.hpp"
#include "permlocal/stats.hpp"
#include "permlocal/textio.hpp"

using namespace permlocal;
using namespace permlocal::sampler;

TEST_CASE("solve_tilt basics") {
  // half capacity gives q = 1 exactly
  const auto half = solve_tilt(5, 5);  // C(5,2) = 10
  CHECK(half.q == 1.0);
  CHECK_FALSE(half.reflected);

  const auto tp = solve_tilt(100, 495);
  double achieved = 0;
  for (long long j = 1; j <= 100; ++j) achieved += qcount::tilted_mean(tp.q, j);
  CHECK(std::abs(achieved - 495.0) < 1e-6);
  CHECK_FALSE(tp.reflected);

  const auto refl = solve_tilt(10, 40);  // C(10,2) = 45, above half
  CHECK(refl.reflected);
  CHECK(refl.target_mean == doctest::Approx(5.0));

  CHECK_THROWS_AS(solve_tilt(2, 0), std::domain_error);
  CHECK_THROWS_AS(solve_tilt(2, 1), std::domain_error);  // no interior m for n=2
}

TEST_CASE("tilted box moments match direct summation") {
  for (double q : {0.3, 0.8, 0.999999, 1.0 - 1e-13}) {
    for (long long c : {1LL, 2LL, 5LL, 40LL}) {
      double z = 0, m1 = 0, m2 = 0;
      for (long long v = 0; v < c; ++v) {
        const double w = std::pow(q, (double)v);
        z += w;
        m1 += (double)v * w;
        m2 += (double)v * (double)v * w;
      }
      const double mean = m1 / z;
      const double var = m2 / z - mean * mean;
      CHECK(qcount::tilted_mean(q, c) == doctest::Approx(mean).epsilon(1e-6));
      CHECK(qcount::tilted_var(q, c) == doctest::Approx(var).epsilon(1e-5));
    }
  }
}

TEST_CASE("dp sampler degenerate classes") {
  RngStream rng(1, 0);
  CHECK(sample_perm_dp(7, 0, rng) == Permutation::identity(7));
  CHECK(sample_perm_dp(7, 21, rng) == Permutation::reversed(7));
}

TEST_CASE("dp sampler splits S_{3,1} evenly") {
  DpSampler smp(3, 1);
  RngStream rng(2, 0);
  std::map<std::vector<int>, long long> counts;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) ++counts[smp.sample(rng).values()];
  CHECK(counts.size() == 2);
  const long long a = counts[{1, 3, 2}];
  const long long b = counts[{2, 1, 3}];
  CHECK(a + b == draws);
  CHECK(std::abs(a - b) < 4 * std::sqrt((double)draws / 4.0) + 1);
}

TEST_CASE("dp sampler table row equals the exact counts") {
  for (long long n : {5LL, 8LL, 12LL}) {
    const long long m = n;  // arbitrary mid value
    DpSampler smp(n, m);
    for (long long s = 0; s <= m; ++s)
      CHECK(smp.table(n, s) == qcount::mahonian(n, s));
  }
}

TEST_CASE("every dp draw lands in the class") {
  DpSampler smp(12, 20);
  RngStream rng(3, 0);
  for (int i = 0; i < 2000; ++i) CHECK(inv_count(smp.sample(rng)) == 20);
}

TEST_CASE("tilted sampler singleton and reflected classes") {
  RngStream rng(4, 0);
  CHECK(sample_perm_tilted(2, 1, rng) == parse_permutation("21"));
  TiltedSampler refl(6, 13);  // above half of C(6,2)=15
  for (int i = 0; i < 500; ++i) CHECK(inv_count(refl.sample(rng)) == 13);
}

TEST_CASE("tilted draws stay in the class and report trials") {
  TiltedSampler smp(30, 80);
  RngStream rng(5, 0);
  long long trials = 0;
  for (int i = 0; i < 500; ++i) {
    const auto code = smp.sample_code(rng, &trials);
    CHECK(trials >= 1);
    CHECK(code.sum() == 80);
  }
}

TEST_CASE("tilted trial budget raises a retryable failure") {
  TiltedSampler smp(40, 200, 1);  // one trial is almost surely not enough
  RngStream rng(6, 0);
  long long seen = -1;
  int failures = 0;
  for (int i = 0; i < 40; ++i) {
    try {
      (void)smp.sample_code(rng);
    } catch (const TrialsExhausted& e) {
      ++failures;
      seen = e.trials;
    }
  }
  CHECK(failures > 0);
  CHECK(seen == 1);
}

TEST_CASE("tilted acceptance rate matches the local-CLT estimate") {
  // within a factor of 3 of 1/(sigma sqrt(2 pi))
  TiltedSampler smp(1000, 31623);
  RngStream rng(7, 0);
  long long total_trials = 0;
  const int accepts = 40;
  for (int i = 0; i < accepts; ++i) {
    long long t = 0;
    (void)smp.sample_code(rng, &t);
    total_trials += t;
  }
  const double measured = (double)total_trials / (double)accepts;
  const double predicted = smp.expected_trials();
  CHECK(measured < 3.0 * predicted);
  CHECK(measured > predicted / 3.0);
}

TEST_CASE("dp and tilted samplers agree on S_{6,5}") {
  const long long n = 6, m = 5;
  std::map<std::vector<int>, int> cell;
  int cells = 0;
  oracle::for_each_perm((int)n, [&](const std::vector<int>& v) {
    if (oracle::inv_pairs(v) == m) cell[v] = cells++;
  });
  CHECK(cells == 71);
  DpSampler dp(n, m);
  TiltedSampler tilted(n, m);
  RngStream r1(8, 0), r2(8, 1);
  std::vector<long long> a((size_t)cells, 0), b((size_t)cells, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    ++a[(size_t)cell[dp.sample(r1).values()]];
    ++b[(size_t)cell[tilted.sample(r2).values()]];
  }
  const auto two = stats::chi_square_two_sample(a, b);
  CHECK(two.p_value > 1e-3);
}

TEST_CASE("hybrid sampler matches exact gap and pattern probabilities") {
  // forced hybrid at a size where the exact engine is available
  const long long n = 40, m = 100;
  HybridDpSampler smp(n, m);
  RngStream rng(9, 0);
  const int draws = 20000;
  long long desc = 0, asc_pat = 0;
  for (int i = 0; i < draws; ++i) {
    const auto code = smp.sample_code(rng);
    CHECK(code.sum() == m);
    const auto w = window_values_via_left_code(code, 3);
    if (w[0] > w[1]) ++desc;
    if (w[0] < w[1] && w[1] < w[2]) ++asc_pat;
  }
  const double p_desc = qcount::exact_gap_prob(n, m, 1).approx;
  const double se_desc = stats::binomial_se(p_desc, draws);
  CHECK(std::abs((double)desc / draws - p_desc) < 4 * se_desc);
  const double p_asc = qcount::exact_pattern_prob(n, m, parse_permutation("123")).approx;
  const double se_asc = stats::binomial_se(p_asc, draws);
  CHECK(std::abs((double)asc_pat / draws - p_asc) < 4 * se_asc);
}

TEST_CASE("hybrid full decode stays in the class") {
  HybridDpSampler smp(50, 300);
  RngStream rng(10, 0);
  for (int i = 0; i < 300; ++i) CHECK(inv_count(smp.sample(rng)) == 300);
}

TEST_CASE("sampler facade picks the hybrid past the exact budget") {
  PermSampler big(PermSampler::Kind::dp, 100000, 1000);
  CHECK(big.approximate());
  CHECK(big.label() == "dp-hybrid");
  RngStream rng(11, 0);
  CHECK(big.sample_code(rng).sum() == 1000);

  PermSampler small(PermSampler::Kind::dp, 50, 100);
  CHECK_FALSE(small.approximate());
  CHECK(small.label() == "dp");
  PermSampler tilted(PermSampler::Kind::tilted, 50, 100);
  CHECK_FALSE(tilted.approximate());
}

TEST_CASE("weak composition sampling") {
  RngStream rng(12, 0);
  CHECK(sample_weak_composition(1, 9, rng) == std::vector<long long>{9});
  CHECK(sample_weak_composition(4, 0, rng) == std::vector<long long>(4, 0));
  // uniformity over the six weak 3-compositions of 2
  std::map<std::vector<long long>, long long> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    auto c = sample_weak_composition(3, 2, rng);
    long long sum = 0;
    for (long long x : c) sum += x;
    CHECK(sum == 2);
    ++counts[c];
  }
  CHECK(counts.size() == 6);
  std::vector<long long> cells;
  for (const auto& [c, cnt] : counts) cells.push_back(cnt);
  const auto cs = stats::chi_square(cells, std::vector<double>(6, draws / 6.0));
  CHECK(cs.p_value > 1e-3);
}

TEST_CASE("pattern-with-density sampling") {
  RngStream rng(13, 0);
  CHECK(sample_pattern_with_density(5, 0.0, rng) == Permutation::identity(5));
  CHECK(sample_pattern_with_density(5, 1.0, rng) == Permutation::reversed(5));
  // rho = 1/2 on k = 4 gives ell = 3, the six-element class
  std::map<std::vector<int>, long long> counts;
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) {
    const auto p = sample_pattern_with_density(4, 0.5, rng);
    CHECK(inv_count(p) == 3);
    ++counts[p.values()];
  }
  CHECK(counts.size() == 6);
}

TEST_CASE("round half to even") {
  CHECK(round_half_even(2.5) == 2);
  CHECK(round_half_even(3.5) == 4);
  CHECK(round_half_even(2.3) == 2);
  CHECK(round_half_even(2.7) == 3);
  CHECK(round_half_even(0.5) == 0);
  CHECK(round_half_even(4.0) == 4);
}

TEST_CASE("samplers are deterministic per stream") {
  DpSampler dp(10, 15);
  RngStream a(99, 3), b(99, 3);
  for (int i = 0; i < 50; ++i) CHECK(dp.sample(a) == dp.sample(b));
  TiltedSampler tilted(10, 15);
  RngStream c(99, 4), d(99, 4);
  for (int i = 0; i < 50; ++i) CHECK(tilted.sample(c) == tilted.sample(d));
}
