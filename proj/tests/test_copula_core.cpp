#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dplot/copula.hpp"
#include "dplot/error.hpp"
#include "dplot/rng.hpp"
#include "oracles.hpp"

using namespace dplot;

namespace {

EmpiricalCopula from_pairs(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<std::uint32_t> perm(pairs.size());
  for (const auto& [a, b] : pairs) perm[static_cast<std::size_t>(a - 1)] = static_cast<std::uint32_t>(b);
  return EmpiricalCopula::from_permutation(perm);
}

EmpiricalCopula identity(std::size_t n, bool reversed = false) {
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 1u);
  if (reversed) std::reverse(perm.begin(), perm.end());
  return EmpiricalCopula::from_permutation(perm);
}

std::vector<std::uint32_t> to_u32(const std::vector<int>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("copula values of small fixtures") {
  CHECK(copula_value(from_pairs({{1, 1}, {2, 2}}), 1, 1) == 0.5);
  CHECK(copula_value(from_pairs({{1, 2}, {2, 1}}), 1, 1) == 0.0);
  const auto c = from_pairs({{1, 2}, {2, 1}, {3, 3}});
  CHECK(copula_value(c, 2, 2) == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(copula_value(c, 1, 1) == 0.0);
  for (std::size_t j = 0; j <= 3; ++j) CHECK(copula_value(c, 0, j) == 0.0);
  CHECK_THROWS_AS(copula_value(c, 4, 0), std::out_of_range);
}

TEST_CASE("hand fixture: rho 1/2, sigma 5/6") {
  const auto c = from_pairs({{1, 2}, {2, 1}, {3, 3}});
  CHECK(spearman_rho(c) == 0.5);
  CHECK(schweizer_wolff(c) == 5.0 / 6.0);
  const auto m = measures(c);
  CHECK(m.rho_n == 0.5);
  CHECK(m.sigma_n == 5.0 / 6.0);
  CHECK(oracle::textbook_spearman({1, 2, 3}, {2, 1, 3}) == doctest::Approx(0.5));
}

TEST_CASE("comonotone and countermonotone are exact") {
  for (const std::size_t n : {2u, 3u, 10u, 100u, 1000u}) {
    const auto up = measures(identity(n));
    const auto down = measures(identity(n, true));
    CHECK(up.rho_n == 1.0);
    CHECK(up.sigma_n == 1.0);
    CHECK(down.rho_n == -1.0);
    CHECK(down.sigma_n == 1.0);
  }
}

TEST_CASE("streaming measures match the naive double sum") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(49);
    const auto perm = oracle::random_permutation(n, rng);
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 1);
    const auto expected = oracle::naive_measures(ids, perm);
    const auto c = EmpiricalCopula::from_permutation(to_u32(perm));
    const auto m = measures(c);
    CHECK(std::abs(m.rho_n - static_cast<double>(expected.rho)) <= 1e-12);
    CHECK(std::abs(m.sigma_n - static_cast<double>(expected.sigma)) <= 1e-12);
    CHECK(spearman_rho(c) == m.rho_n);
    // Edge terms separate this estimator from the textbook formula by O(1/n).
    CHECK(std::abs(m.rho_n - oracle::textbook_spearman(ids, perm)) <= 3.0 / static_cast<double>(n));
  }
}

TEST_CASE("tied data: counts follow the indicator definition") {
  Rng rng(102);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng.below(30);
    std::vector<double> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = static_cast<double>(rng.below(5));
      y[k] = static_cast<double>(rng.below(4));
    }
    if (std::all_of(x.begin(), x.end(), [&](double e) { return e == x[0]; }) ||
        std::all_of(y.begin(), y.end(), [&](double e) { return e == y[0]; })) {
      continue;
    }
    const auto p = rank_transform(BivariateSample(x, y));
    const auto c = empirical_copula(p);
    CHECK(c.tie_adjusted());
    // Order statistics x_(i), y_(j).
    auto xs = x, ys = y;
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    std::vector<int> rx(n), ry(n);
    for (std::size_t k = 0; k < n; ++k) {
      rx[k] = 1 + static_cast<int>(std::lower_bound(xs.begin(), xs.end(), x[k]) - xs.begin());
      ry[k] = 1 + static_cast<int>(std::lower_bound(ys.begin(), ys.end(), y[k]) - ys.begin());
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        std::uint32_t expected = 0;
        for (std::size_t k = 0; k < n; ++k) expected += (x[k] <= xs[i - 1] && y[k] <= ys[j - 1]) ? 1 : 0;
        REQUIRE(c.count(i, j) == expected);
      }
    }
    const auto expected = oracle::naive_measures(rx, ry);
    const auto m = measures(c);
    CHECK(std::abs(m.rho_n - static_cast<double>(expected.rho)) <= 1e-12);
    CHECK(std::abs(m.sigma_n - static_cast<double>(expected.sigma)) <= 1e-12);
  }
  CHECK_THROWS_AS(empirical_copula(rank_transform(BivariateSample({1, 1, 1}, {1, 2, 3}))), DataError);
}

TEST_CASE("property fuzz: bounds, swap, Frechet-Hoeffding, thread count") {
  Rng rng(103);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(120);
    const auto perm = oracle::random_permutation(n, rng);
    const auto c = EmpiricalCopula::from_permutation(to_u32(perm));
    const auto m = measures(c);
    CHECK(m.sigma_n >= std::abs(m.rho_n) - 1e-12);
    CHECK(m.sigma_n <= 1.0);
    CHECK(m.rho_n >= -1.0);
    const auto t = measures(c.transposed());
    CHECK(t.rho_n == m.rho_n);
    CHECK(t.sigma_n == m.sigma_n);
    const auto threaded = measures(c, 3);
    CHECK(threaded.rho_n == m.rho_n);
    CHECK(threaded.sigma_n == m.sigma_n);
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j <= n; j += 1 + n / 16) {
        const auto count = c.count(i, j);
        const auto lower = i + j > n ? i + j - n : 0;
        CHECK(count >= lower);
        CHECK(count <= std::min(i, j));
      }
    }
    CHECK(c.count(n, n / 2) == n / 2);
    CHECK(c.count(n / 3, n) == n / 3);
  }
}

TEST_CASE("empirical_copula sorts on u and reads v ranks") {
  PseudoObservations p;
  p.u = {0.75, 0.25, 1.0, 0.5};
  p.v = {0.5, 1.0, 0.25, 0.75};
  const auto c = empirical_copula(p);
  CHECK_FALSE(c.tie_adjusted());
  const std::vector<std::uint32_t> expected{4, 3, 2, 1};
  CHECK(std::equal(c.y_rank().begin(), c.y_rank().end(), expected.begin()));
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(EmpiricalCopula({1}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalCopula({2, 1}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalCopula({1, 2}, {1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalCopula::from_permutation({1, 1}), std::invalid_argument);
}

TEST_CASE("pearson correlation") {
  CHECK(*pearson_r(BivariateSample({1, 2, 3, 4}, {3, 5, 7, 9})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*pearson_r(BivariateSample({1, 2, 3}, {3, 2, 1})) == doctest::Approx(-1.0));
  CHECK_FALSE(pearson_r(BivariateSample({1, 2, 3}, {5, 5, 5})).has_value());
}

TEST_CASE("diagonal sections") {
  const auto c = from_pairs({{1, 2}, {2, 1}, {3, 3}});
  const auto d = diagonal_sections(c, 3);
  REQUIRE(d.size() == 4);
  CHECK(d.t[2] == doctest::Approx(2.0 / 3));
  CHECK(d.delta[2] == doctest::Approx(2.0 / 3));
  CHECK(d.delta_pi[2] == doctest::Approx(4.0 / 9));
  CHECK(d.delta[0] == 0.0);
  CHECK(d.delta[3] == 1.0);
  CHECK_THROWS_AS(diagonal_sections(c, 1), std::invalid_argument);

  for (const std::size_t n : {10u, 100u, 777u}) {
    const double tol = 1.0 / static_cast<double>(n);
    const auto up = diagonal_sections(identity(n), default_diagonal_grid(n));
    const auto down = diagonal_sections(identity(n, true), default_diagonal_grid(n));
    for (std::size_t k = 0; k < up.size(); ++k) {
      CHECK(std::abs(up.delta[k] - up.t[k]) <= tol + 1e-15);
      CHECK(down.lambda[k] <= tol + 1e-15);
    }
  }
}

TEST_CASE("diagonal sections agree with direct counts and respect the bounds") {
  Rng rng(104);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(300);
    const auto c = EmpiricalCopula::from_permutation(to_u32(oracle::random_permutation(n, rng)));
    const std::size_t m = 2 + rng.below(2 * n);
    const auto d = diagonal_sections(c, m);
    const double slack = 1.0 / static_cast<double>(n) + 1e-12;
    for (std::size_t k = 0; k <= m; ++k) {
      const auto i = k * n / m;
      const auto j = (m - k) * n / m;
      CHECK(d.delta[k] == copula_value(c, i, i));
      CHECK(d.lambda[k] == copula_value(c, i, j));
      const double t = d.t[k];
      CHECK(d.delta[k] <= t + slack);
      CHECK(d.lambda[k] >= 0.0);
      CHECK(d.lambda[k] <= std::min(t, 1.0 - t) + slack);
      if (m == n) CHECK(d.delta[k] >= std::max(2.0 * t - 1.0, 0.0) - 1e-12);
    }
  }
}

TEST_CASE("permutation test") {
  PseudoObservations p;
  for (int k = 1; k <= 100; ++k) {
    p.u.push_back(k / 100.0);
    p.v.push_back(k / 100.0);
  }
  PermutationTestOptions o;
  o.seed = 1;
  auto r = independence_permutation_test(p, o);
  CHECK(r.p_value == 1.0 / 200.0);
  CHECK(r.tested_n == 100);

  o.permutations = 19;
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto perm = oracle::random_permutation(50, rng);
    PseudoObservations q;
    for (std::size_t k = 0; k < 50; ++k) {
      q.u.push_back(static_cast<double>(k + 1) / 50.0);
      q.v.push_back(perm[k] / 50.0);
    }
    r = independence_permutation_test(q, o);
    const double scaled = r.p_value * 20.0;
    CHECK(scaled == doctest::Approx(std::round(scaled)));
    CHECK(r.p_value >= 0.05);
    CHECK(r.p_value <= 1.0);
    o.threads = 4;
    CHECK(independence_permutation_test(q, o).p_value == r.p_value);
    o.threads = 1;
  }
  o.permutations = 18;
  CHECK_THROWS_AS(independence_permutation_test(p, o), std::invalid_argument);
}

TEST_CASE("permutation test subsamples large inputs") {
  Rng rng(6);
  const auto perm = oracle::random_permutation(3000, rng);
  PseudoObservations q;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    q.u.push_back(static_cast<double>(k + 1) / 3000.0);
    q.v.push_back(perm[k] / 3000.0);
  }
  PermutationTestOptions o;
  o.permutations = 19;
  o.max_n = 500;
  const auto r = independence_permutation_test(q, o);
  CHECK(r.tested_n == 500);
  CHECK(independence_permutation_test(q, o).p_value == r.p_value);
}

TEST_CASE("independent data rarely rejects") {
  Rng rng(7);
  int above = 0;
  PermutationTestOptions o;
  o.permutations = 99;
  for (int trial = 0; trial < 100; ++trial) {
    const auto perm = oracle::random_permutation(100, rng);
    PseudoObservations q;
    for (std::size_t k = 0; k < perm.size(); ++k) {
      q.u.push_back(static_cast<double>(k + 1) / 100.0);
      q.v.push_back(perm[k] / 100.0);
    }
    o.seed = static_cast<std::uint64_t>(trial);
    above += independence_permutation_test(q, o).p_value > 0.05 ? 1 : 0;
  }
  CHECK(above >= 88);
}
