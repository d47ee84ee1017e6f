#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dplot/error.hpp"
#include "dplot/ranks.hpp"
#include "dplot/rng.hpp"

using namespace dplot;

TEST_CASE("ranks of a small sample") {
  const auto p = rank_transform(BivariateSample({3.2, 1.1, 5.0}, {1, 2, 3}));
  CHECK(p.u == std::vector<double>{2.0 / 3, 1.0 / 3, 1.0});
  CHECK_FALSE(p.has_ties());
}

TEST_CASE("tie policies") {
  const std::vector<double> x{1, 1, 2};
  CHECK(rank(x, TiePolicy::average()) == std::vector<double>{1.5, 1.5, 3});
  CHECK(rank(x, TiePolicy::min()) == std::vector<double>{1, 1, 3});
  CHECK_THROWS_AS(rank(x, TiePolicy::error()), DataError);
  const auto r = rank(x, TiePolicy::random(9));
  CHECK(((r == std::vector<double>{1, 2, 3}) || (r == std::vector<double>{2, 1, 3})));
  TieReport report;
  rank(std::vector<double>{4, 4, 4, 1, 2, 2}, TiePolicy::average(), &report);
  CHECK(report.groups == 2);
  CHECK(report.tied_values == 5);

  const auto p = rank_transform(BivariateSample({1, 1, 2}, {5, 6, 7}));
  CHECK(p.u == std::vector<double>{0.5, 0.5, 1.0});
  CHECK(p.has_ties());
  CHECK(to_string(p.policy) == "average");
  CHECK(parse_tie_policy("avg", 0).kind == TiePolicy::Kind::Average);
  CHECK(parse_tie_policy("random", 4).seed == 4);
  CHECK_THROWS_AS(parse_tie_policy("median", 0), std::invalid_argument);
}

TEST_CASE("random tie breaking is a seeded permutation of the tied block") {
  std::vector<double> x(40, 1.0);
  x.push_back(0.0);
  const auto a = rank(x, TiePolicy::random(1));
  const auto b = rank(x, TiePolicy::random(1));
  const auto c = rank(x, TiePolicy::random(2));
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.back() == 1.0);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) CHECK(sorted[k] == static_cast<double>(k + 1));
}

TEST_CASE("tie-free marginals are exactly the grid k/n") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(300);
    std::vector<double> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = rng.uniform();
      y[k] = -std::log(rng.uniform_open());
    }
    const auto p = rank_transform(BivariateSample(x, y));
    auto u = p.u, v = p.v;
    std::sort(u.begin(), u.end());
    std::sort(v.begin(), v.end());
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(u[k] == static_cast<double>(k + 1) / static_cast<double>(n));
      CHECK(v[k] == u[k]);
    }
  }
}

TEST_CASE("monotone transforms leave pseudo-observations bit-identical") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(200);
    std::vector<double> x(n), y(n), tx(n), ty(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = rng.uniform() * 4 - 2;
      y[k] = rng.uniform() * 3 - 1;
      tx[k] = std::exp(x[k]);
      ty[k] = y[k] * y[k] * y[k];
    }
    CHECK(rank_transform(BivariateSample(x, y)) == rank_transform(BivariateSample(tx, ty)));
  }
}

TEST_CASE("ecdf") {
  const std::vector<double> v{1, 2, 3};
  CHECK(ecdf(v, 2) == doctest::Approx(2.0 / 3));
  CHECK(ecdf(v, 0.5) == 0.0);
  CHECK(ecdf(v, 3) == 1.0);
  CHECK(ecdf(v, 99) == 1.0);

  Rng rng(3);
  std::vector<double> values(501);
  for (auto& e : values) e = std::floor(rng.uniform() * 50);
  const EmpiricalDistribution dist(values);
  for (int q = -1; q <= 51; ++q) {
    std::size_t brute = 0;
    for (const double e : values) brute += e <= q ? 1 : 0;
    const double expected = static_cast<double>(brute) / static_cast<double>(values.size());
    CHECK(ecdf(values, q) == expected);
    CHECK(dist.cdf(q) == expected);
  }
}

TEST_CASE("empirical quantile is the left-continuous inverse") {
  const std::vector<double> v{5, 1, 4, 2, 3};
  CHECK(empirical_quantile(v, 0.8) == 4);
  CHECK(empirical_quantile(v, 1.0) == 5);
  CHECK(empirical_quantile(v, 0.2) == 1);
  CHECK(empirical_quantile(v, 0.21) == 2);
  CHECK_THROWS_AS(empirical_quantile(v, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(empirical_quantile(v, 1.5), std::invalid_argument);

  Rng rng(8);
  std::vector<double> values(97);
  for (auto& e : values) e = rng.uniform();
  for (int k = 1; k <= 1000; ++k) {
    const double p = k / 1000.0;
    const double q = empirical_quantile(values, p);
    CHECK(ecdf(values, q) >= p);
    // Nothing smaller qualifies.
    double below = -1;
    for (const double e : values) {
      if (e < q) below = std::max(below, e);
    }
    if (below >= 0) CHECK(ecdf(values, below) < p);
  }
  // p = k/n exactly lands on the k-th order statistic.
  auto sorted = values;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 1; k <= sorted.size(); ++k) {
    CHECK(empirical_quantile(values, static_cast<double>(k) / 97.0) == sorted[k - 1]);
  }
}
