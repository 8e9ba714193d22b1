#include <doctest.h>

#include <algorithm>
#include <map>

#include "oracle.hpp"
#include "permlocal/qcount.hpp"
#include "permlocal/qcount_approx.hpp"
#include "permlocal/rng.hpp"
#include "permlocal/textio.hpp"

using namespace permlocal;
using namespace permlocal::qcount;

TEST_CASE("capacity_poly worked examples") {
  auto v = capacity_poly({0, 1, 2}, 3);
  CHECK(v.coeff(0) == 1);
  CHECK(v.coeff(1) == 2);
  CHECK(v.coeff(2) == 2);
  CHECK(v.coeff(3) == 1);

  auto unit = capacity_poly({}, 4);
  CHECK(unit.coeff(0) == 1);
  CHECK(unit.coeff(1) == 0);
  CHECK(unit.coeff(4) == 0);

  auto two = capacity_poly({1, 1}, 2);
  CHECK(two.coeff(0) == 1);
  CHECK(two.coeff(1) == 2);
  CHECK(two.coeff(2) == 1);
}

TEST_CASE("capacity_poly matches brute-force fillings") {
  const std::vector<std::vector<long long>> systems = {
      {0, 1, 2, 3}, {2, 2, 2}, {1, 3, 5}, {4}, {0, 0, 3, 1}};
  for (const auto& caps : systems) {
    long long total_cap = 0;
    for (long long c : caps) total_cap += c;
    auto v = capacity_poly(caps, total_cap);
    for (long long s = 0; s <= total_cap; ++s)
      CHECK(v.coeff(s) == oracle::fillings(caps, s));
  }
}

TEST_CASE("capacity_poly is independent of box order and sums to the product") {
  RngStream rng(3, 0);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<long long> caps;
    long long total = 0;
    const int boxes = 1 + (int)rng.uniform_below(6);
    BigInt product = 1;
    for (int i = 0; i < boxes; ++i) {
      caps.push_back((long long)rng.uniform_below(7));
      total += caps.back();
      product *= caps.back() + 1;
    }
    auto base = capacity_poly(caps, total);
    CHECK(base.total() == product);
    std::vector<long long> shuffled = caps;
    for (size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[rng.uniform_below(i)]);
    CHECK(capacity_poly(shuffled, total) == base);
  }
}

TEST_CASE("mahonian row n=4 and boundary values") {
  const std::vector<long long> want{1, 3, 5, 6, 5, 3, 1};
  for (long long m = 0; m <= 6; ++m) CHECK(mahonian(4, m) == want[(size_t)m]);
  CHECK(mahonian(4, 7) == 0);
  for (long long n = 1; n <= 9; ++n) {
    CHECK(mahonian(n, 0) == 1);
    CHECK(mahonian(n, n * (n - 1) / 2) == 1);
  }
}

TEST_CASE("mahonian matches the exhaustive census and sums to n!") {
  for (int n = 1; n <= 8; ++n) {
    std::map<long long, long long> census;
    oracle::for_each_perm(n, [&](const std::vector<int>& v) { ++census[oracle::inv_pairs(v)]; });
    BigInt total = 0;
    for (long long m = 0; m <= (long long)n * (n - 1) / 2; ++m) {
      CHECK(mahonian(n, m) == census[m]);
      total += mahonian(n, m);
    }
    CHECK(total == oracle::factorial(n));
  }
}

TEST_CASE("weak composition counts") {
  CHECK(weak_comp_count(3, 2) == 6);
  CHECK(weak_comp_count(1, 12345) == 1);
  CHECK(weak_comp_count(2, 5) == 6);
  CHECK(weak_comp_count(0, 0) == 1);
  CHECK(weak_comp_count(0, 3) == 0);
  for (long long t = 1; t <= 4; ++t)
    for (long long s = 0; s <= 6; ++s)
      CHECK(weak_comp_count(t, s) ==
            oracle::fillings(std::vector<long long>((size_t)t, s), s));
}

TEST_CASE("restricted compositions") {
  CHECK(restricted_comp_count(2, 3, 3) == 2);
  CHECK(restricted_comp_count(3, 3, 2) == 1);
  CHECK(restricted_comp_count(4, 3, 9) == weak_comp_count(4, 3));
  CHECK_THROWS_AS(restricted_comp_count(0, 1, 2), std::domain_error);
  CHECK_THROWS_AS(restricted_comp_count(2, 1, 0), std::domain_error);
}

TEST_CASE("inversion-sequence suffix counts and the sandwich") {
  CHECK(inv_suffix_count(2, 2, 1) == 2);
  CHECK(inv_suffix_count(3, 2, 5) == weak_comp_count(3, 2));
  for (long long t = 1; t <= 8; ++t)
    for (long long s = 0; s <= 12; ++s)
      for (long long r = 1; r <= 5; ++r) {
        const BigInt lo = restricted_comp_count(t, s, r);
        const BigInt mid = inv_suffix_count(t, s, r);
        const BigInt hi = weak_comp_count(t, s);
        CHECK(lo <= mid);
        CHECK(mid <= hi);
      }
  for (long long t = 1; t <= 4; ++t)
    for (long long r = 0; r <= 3; ++r)
      for (long long s = 0; s <= 8; ++s) {
        std::vector<long long> caps;
        for (long long j = 0; j < t; ++j) caps.push_back(r + j);
        CHECK(inv_suffix_count(t, s, r) == oracle::fillings(caps, s));
      }
}

TEST_CASE("prefix counts against exhaustive window censuses") {
  CHECK(prefix_count(4, 2, 2, 1) == 2);
  for (int n = 2; n <= 7; ++n) {
    std::map<long long, std::map<int, std::map<std::vector<int>, long long>>> census;
    oracle::for_each_perm(n, [&](const std::vector<int>& v) {
      const long long m = oracle::inv_pairs(v);
      for (int k = 1; k <= std::min(n, 4); ++k) {
        std::vector<int> w(v.begin(), v.begin() + k);
        ++census[m][k][oracle::standardize(w)];
      }
    });
    for (const auto& [m, per_k] : census)
      for (const auto& [k, per_pat] : per_k)
        for (const auto& [pat, cnt] : per_pat)
          CHECK(prefix_count(n, m, k, oracle::inv_pairs(pat)) == cnt);
  }
  CHECK(prefix_count(6, 3, 0, 0) == mahonian(6, 3));
  CHECK_THROWS_AS(prefix_count(6, 3, 2, 5), std::domain_error);
  CHECK(prefix_count(6, 2, 3, 3) == 0);  // m < ell
}

TEST_CASE("prefix counts convolve back to the class size") {
  for (long long n = 1; n <= 8; ++n)
    for (long long k = 0; k <= n; ++k)
      for (long long m = 0; m <= n * (n - 1) / 2; ++m) {
        BigInt sum = 0;
        for (long long ell = 0; ell <= k * (k - 1) / 2; ++ell)
          sum += mahonian(k, ell) * prefix_count(n, m, k, ell);
        CHECK(sum == mahonian(n, m));
      }
}

TEST_CASE("gap counts worked examples and brute force") {
  auto g1 = gap_counts(4, 2, 1);
  CHECK(g1.up == 3);
  CHECK(g1.down == 2);
  auto g2 = gap_counts(4, 2, 2);
  CHECK(g2.up == 3);
  CHECK(g2.down == 2);
  auto g0 = gap_counts(5, 0, 2);
  CHECK(g0.up == 1);
  CHECK(g0.down == 0);
  CHECK_THROWS_AS(gap_counts(4, 1, 0), std::domain_error);
  CHECK_THROWS_AS(gap_counts(4, 1, 4), std::domain_error);

  for (int n = 2; n <= 7; ++n) {
    std::map<long long, std::map<int, long long>> down;
    std::map<long long, long long> census;
    oracle::for_each_perm(n, [&](const std::vector<int>& v) {
      const long long m = oracle::inv_pairs(v);
      ++census[m];
      for (int k = 1; k <= n - 1; ++k)
        if (v[0] > v[(size_t)k]) ++down[m][k];
    });
    for (long long m = 0; m <= (long long)n * (n - 1) / 2; ++m)
      for (int k = 1; k <= n - 1; ++k) {
        const auto gc = gap_counts(n, m, k);
        CHECK(gc.down == down[m][k]);
        CHECK(gc.up + gc.down == census[m]);
      }
  }
}

TEST_CASE("gap counts sum to the class size on a wider grid") {
  for (long long n = 2; n <= 10; ++n)
    for (long long k = 1; k <= n - 1; ++k)
      for (long long m = 0; m <= n * (n - 1) / 2; ++m) {
        const auto gc = gap_counts(n, m, k);
        CHECK(gc.up + gc.down == mahonian(n, m));
      }
}

TEST_CASE("exact pattern probability") {
  const auto p = exact_pattern_prob(4, 2, parse_permutation("21"));
  CHECK(p.num == 2);
  CHECK(p.den == 5);
  CHECK(p.approx == doctest::Approx(0.4));
  const auto q = exact_pattern_prob(4, 2, parse_permutation("12"));
  CHECK(q.num == 3);
  CHECK(q.den == 5);
  CHECK(p.num * q.den + q.num * p.den == p.den * q.den);  // complementary
  const auto one = exact_pattern_prob(5, 3, parse_permutation("1"));
  CHECK(one.num == 1);
  CHECK(one.den == 1);
  CHECK_THROWS_AS(exact_pattern_prob(3, 4, parse_permutation("21")), std::domain_error);
}

TEST_CASE("pattern probability depends on the pattern only through its inversions") {
  for (int n = 4; n <= 6; ++n)
    for (long long m = 0; m <= (long long)n * (n - 1) / 2; m += 2)
      for (int k = 2; k <= 3; ++k) {
        std::map<long long, std::pair<BigInt, BigInt>> by_ell;
        oracle::for_each_perm(k, [&](const std::vector<int>& tau) {
          const auto pr = exact_pattern_prob(n, m, Permutation(tau));
          const long long ell = oracle::inv_pairs(tau);
          auto it = by_ell.find(ell);
          if (it == by_ell.end()) {
            by_ell[ell] = {pr.num, pr.den};
          } else {
            CHECK(it->second.first == pr.num);
            CHECK(it->second.second == pr.den);
          }
        });
      }
}

TEST_CASE("exact gap probability") {
  const auto p = exact_gap_prob(4, 2, 1);
  CHECK(p.num == 2);
  CHECK(p.den == 5);
  const auto zero = exact_gap_prob(6, 0, 2);
  CHECK(zero.num == 0);
  const auto one = exact_gap_prob(6, 15, 2);
  CHECK(one.num == 1);
  CHECK(one.den == 1);
}

TEST_CASE("first-gap split equals the length-2 prefix counts") {
  // two independent box systems computing the same quantity
  for (long long n = 3; n <= 10; ++n)
    for (long long m = 0; m <= n * (n - 1) / 2; ++m) {
      const auto gc = gap_counts(n, m, 1);
      CHECK(gc.up == prefix_count(n, m, 2, 0));
      CHECK(gc.down == prefix_count(n, m, 2, 1));
    }
}

TEST_CASE("binomial helper") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(5, 6) == 0);
  CHECK(binomial(60, 30) == BigInt("118264581564861424"));
}

TEST_CASE("tilted log rows agree with exact coefficients") {
  std::vector<long long> caps;
  for (long long j = 0; j < 30; ++j) caps.push_back(j);
  const long long total = 30 * 29 / 2;
  auto exact = capacity_poly(caps, total);
  for (long long target : {40LL, 150LL, 300LL, 400LL}) {
    TiltedCoeffRow row(caps, total, target);
    for (long long s = std::max<long long>(0, target - 10);
         s <= std::min(total, target + 10); ++s) {
      const double got = row.log_coeff(s);
      const double want = log_big(exact.coeff(s));
      CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("approximate probabilities track the exact engine") {
  const double ag = approx_gap_prob(60, 400, 5);
  const auto eg = exact_gap_prob(60, 400, 5);
  CHECK(ag == doctest::Approx(eg.approx).epsilon(1e-8));
  const double ap = approx_pattern_prob(60, 400, 2, 1);
  const auto ep = exact_pattern_prob(60, 400, parse_permutation("21"));
  CHECK(ap == doctest::Approx(ep.approx).epsilon(1e-8));
  CHECK(approx_log_mahonian(40, 100) ==
        doctest::Approx(log_big(mahonian(40, 100))).epsilon(1e-9));
}

TEST_CASE("probability serialization") {
  const auto p = exact_gap_prob(4, 2, 1);
  CHECK(p.json() == "{\"num\": \"2\", \"den\": \"5\", \"approx\": 0.40000000000000002}");
}
