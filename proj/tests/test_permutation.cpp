#include <doctest.h>

#include <map>

#include "oracle.hpp"
#include "permlocal/permutation.hpp"
#include "permlocal/rng.hpp"
#include "permlocal/textio.hpp"

using namespace permlocal;

namespace {

Permutation random_perm(int n, RngStream& rng) {
  std::vector<int> v((size_t)n);
  for (int i = 0; i < n; ++i) v[(size_t)i] = i + 1;
  for (int i = n - 1; i > 0; --i)
    std::swap(v[(size_t)i], v[(size_t)rng.uniform_below((uint64_t)i + 1)]);
  return Permutation(std::move(v));
}

}  // namespace

TEST_CASE("permutation validation") {
  CHECK_THROWS_AS(Permutation({1, 1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({2, 3, 4}), std::invalid_argument);
  CHECK(Permutation::identity(4) == parse_permutation("1 2 3 4"));
}

TEST_CASE("inversion count on the worked example") {
  const Permutation p = parse_permutation("735846192");
  CHECK(inv_count(p) == 20);
  CHECK(inv_count_quadratic(p) == 20);
  CHECK(inv_count_logn(p) == 20);
  CHECK(inv_count(Permutation::identity(9)) == 0);
  CHECK(inv_count(parse_permutation("4321")) == 6);
}

TEST_CASE("both inversion counters agree on random input") {
  RngStream rng(7, 0);
  for (int rep = 0; rep < 10'000; ++rep) {
    const int n = 1 + (int)rng.uniform_below(256);
    const Permutation p = random_perm(n, rng);
    CHECK(inv_count_quadratic(p) == inv_count_logn(p));
  }
}

TEST_CASE("inversion density") {
  const Permutation p = parse_permutation("735846192");
  const auto d = inv_density(p);
  CHECK(d.num == 5);
  CHECK(d.den == 9);
  CHECK(inv_density(Permutation::identity(5)).num == 0);
  const auto rev = inv_density(Permutation::reversed(6));
  CHECK(rev.num == 1);
  CHECK(rev.den == 1);
  CHECK_THROWS_AS(inv_density(Permutation::identity(1)), std::domain_error);
}

TEST_CASE("total displacement and the two-sided inversion bound") {
  CHECK(total_displacement(Permutation::identity(5)) == 0);
  const Permutation p = parse_permutation("735846192");
  CHECK(total_displacement(p) == 28);
  RngStream rng(11, 0);
  for (int rep = 0; rep < 2000; ++rep) {
    const Permutation q = random_perm(2 + (int)rng.uniform_below(64), rng);
    const long long inv = inv_count(q), td = total_displacement(q);
    CHECK(inv <= td);
    CHECK(td <= 2 * inv);
  }
}

TEST_CASE("inversion sequence of the worked example") {
  const Permutation p = parse_permutation("735846192");
  const auto s = to_inv_sequence(p);
  CHECK(s.terms == std::vector<long long>{0, 1, 1, 0, 3, 2, 6, 0, 7});
  CHECK(s.sum() == 20);
  CHECK(from_inv_sequence(s) == p);
}

TEST_CASE("code bijection round trip, exhaustive small n") {
  for (int n = 1; n <= 7; ++n) {
    oracle::for_each_perm(n, [&](const std::vector<int>& v) {
      const Permutation p(v);
      const auto code = to_inv_sequence(p);
      CHECK(code.sum() == oracle::inv_pairs(v));
      CHECK(from_inv_sequence(code) == p);
    });
  }
}

TEST_CASE("code bijection round trip, randomized large n") {
  RngStream rng(5, 1);
  for (int rep = 0; rep < 300; ++rep) {
    const Permutation p = random_perm(2 + (int)rng.uniform_below(255), rng);
    CHECK(from_inv_sequence(to_inv_sequence(p)) == p);
  }
}

TEST_CASE("from_inv_sequence rejects capacity violations") {
  InversionSequence bad;
  bad.terms = {0, 2};  // e_2 must be < 2 is fine; 2 is not
  CHECK_THROWS_AS(from_inv_sequence(bad), std::invalid_argument);
  InversionSequence zeros;
  zeros.terms = {0, 0, 0, 0};
  CHECK(from_inv_sequence(zeros) == Permutation::identity(4));
  InversionSequence maximal;
  maximal.terms = {0, 1, 2, 3};
  CHECK(from_inv_sequence(maximal) == Permutation::reversed(4));
}

TEST_CASE("left-code window values match the pair-scan left code") {
  RngStream rng(13, 0);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 2 + (int)rng.uniform_below(64);
    const Permutation p = random_perm(n, rng);
    // left code by pair scan: inversions whose left end is at position j
    std::vector<long long> left((size_t)n, 0);
    long long total = 0;
    for (int j = 1; j <= n; ++j)
      for (int i = j + 1; i <= n; ++i)
        if (p(i) < p(j)) ++left[(size_t)j - 1], ++total;
    CHECK(total == inv_count(p));
    InversionSequence s;
    s.terms.assign(left.rbegin(), left.rend());
    const int w = 1 + (int)rng.uniform_below((uint64_t)n);
    const auto window = window_values_via_left_code(s, w);
    for (int i = 0; i < w; ++i) CHECK(window[(size_t)i] == p(i + 1));
  }
}

TEST_CASE("shift bijection on the worked vector") {
  const Permutation p = parse_permutation("714592683");
  const Permutation q = psi_shift(p);
  CHECK(q == parse_permutation("761349258"));
  CHECK(inv_count(q) == inv_count(p));
  CHECK(psi_unshift(q) == p);
  CHECK(window_pattern(p, 3, 4) == parse_permutation("2341"));
  CHECK(window_pattern(q, 4, 4) == parse_permutation("2341"));
  CHECK(psi_shift(Permutation::identity(6)) == Permutation::identity(6));
  CHECK(psi_unshift(Permutation::identity(6)) == Permutation::identity(6));
}

TEST_CASE("shift is a bijection on every inversion class of S_5") {
  std::map<long long, std::map<std::vector<int>, int>> classes;
  oracle::for_each_perm(5, [&](const std::vector<int>& v) {
    const Permutation p(v);
    const Permutation q = psi_shift(p);
    CHECK(inv_count(q) == oracle::inv_pairs(v));
    ++classes[oracle::inv_pairs(v)][q.values()];
  });
  long long total = 0;
  for (const auto& [m, imgs] : classes) {
    for (const auto& [vals, cnt] : imgs) CHECK(cnt == 1);
    total += (long long)imgs.size();
  }
  CHECK(total == 120);
}

TEST_CASE("patterns move one step right under the shift") {
  oracle::for_each_perm(6, [&](const std::vector<int>& v) {
    const Permutation p(v);
    const Permutation q = psi_shift(p);
    for (int k = 1; k <= 5; ++k)
      for (int j = 1; j + k - 1 <= 5; ++j)
        CHECK(window_pattern(q, j + 1, k) == window_pattern(p, j, k));
  });
}

TEST_CASE("shift round trip on random permutations") {
  RngStream rng(17, 0);
  for (int rep = 0; rep < 10'000; ++rep) {
    const Permutation p = random_perm(1 + (int)rng.uniform_below(64), rng);
    CHECK(psi_unshift(psi_shift(p)) == p);
    CHECK(psi_shift(psi_unshift(p)) == p);
  }
}

TEST_CASE("window pattern basics") {
  const Permutation p = parse_permutation("714592683");
  CHECK(window_pattern(p, 1, 1) == Permutation::identity(1));
  CHECK(window_pattern(Permutation::identity(8), 3, 4) == Permutation::identity(4));
  CHECK_THROWS_AS(window_pattern(p, 7, 4), std::out_of_range);
  CHECK_THROWS_AS(window_pattern(p, 0, 2), std::out_of_range);
}

TEST_CASE("permutation text round trip") {
  CHECK(parse_permutation("2341") == parse_permutation("2, 3, 4, 1"));
  CHECK(parse_permutation("10 2 3 4 5 6 7 8 9 1").size() == 10);
  CHECK(format_permutation(parse_permutation("2341")) == "2 3 4 1");
  CHECK(format_permutation(parse_permutation("21"), ',') == "2,1");
  CHECK_THROWS_AS(parse_permutation(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_permutation("12x"), std::invalid_argument);
  RngStream rng(23, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const Permutation p = random_perm(1 + (int)rng.uniform_below(30), rng);
    CHECK(parse_permutation(format_permutation(p)) == p);
  }
}
