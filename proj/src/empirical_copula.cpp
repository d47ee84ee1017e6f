#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "dplot/copula.hpp"
#include "dplot/error.hpp"

namespace dplot {

EmpiricalCopula::EmpiricalCopula(std::vector<std::uint32_t> x_rank,
                                 std::vector<std::uint32_t> y_rank)
    : x_rank_(std::move(x_rank)), y_rank_(std::move(y_rank)) {
  const auto n = y_rank_.size();
  if (x_rank_.size() != n) throw std::invalid_argument("rank arrays differ in length");
  if (n < 2) throw std::invalid_argument("empirical copula needs n >= 2");
  if (!std::is_sorted(x_rank_.begin(), x_rank_.end())) {
    throw std::invalid_argument("x ranks must be in non-decreasing order");
  }
  std::vector<bool> seen(n + 1, false);
  bool permutation = true;
  for (std::size_t k = 0; k < n; ++k) {
    const auto xr = x_rank_[k];
    const auto yr = y_rank_[k];
    if (xr < 1 || xr > n || yr < 1 || yr > n) {
      throw std::invalid_argument(fmt::format("rank out of [1, {}] at {}", n, k));
    }
    if (xr != k + 1 || seen[yr]) permutation = false;
    seen[yr] = true;
  }
  tie_adjusted_ = !permutation;
}

EmpiricalCopula EmpiricalCopula::from_permutation(std::vector<std::uint32_t> perm) {
  std::vector<std::uint32_t> x(perm.size());
  std::iota(x.begin(), x.end(), 1u);
  EmpiricalCopula c(std::move(x), std::move(perm));
  if (c.tie_adjusted()) throw std::invalid_argument("not a permutation of 1..n");
  return c;
}

std::uint32_t EmpiricalCopula::count(std::size_t i, std::size_t j) const {
  const auto n = size();
  if (i > n || j > n) {
    throw std::out_of_range(fmt::format("copula index ({}, {}) outside [0, {}]", i, j, n));
  }
  std::uint32_t c = 0;
  for (std::size_t k = 0; k < n && x_rank_[k] <= i; ++k) c += (y_rank_[k] <= j) ? 1 : 0;
  return c;
}

EmpiricalCopula EmpiricalCopula::transposed() const {
  const auto n = size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return y_rank_[a] != y_rank_[b] ? y_rank_[a] < y_rank_[b] : x_rank_[a] < x_rank_[b];
  });
  std::vector<std::uint32_t> xr(n), yr(n);
  for (std::size_t k = 0; k < n; ++k) {
    xr[k] = y_rank_[order[k]];
    yr[k] = x_rank_[order[k]];
  }
  return EmpiricalCopula(std::move(xr), std::move(yr));
}

namespace {

// Minimum ranks: 1 + #{l : values_l < values_k}.
std::vector<std::uint32_t> min_ranks(const std::vector<double>& values, const char* axis) {
  const auto n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::uint32_t> ranks(n);
  std::size_t group_start = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && values[order[k]] != values[order[k - 1]]) group_start = k;
    ranks[order[k]] = static_cast<std::uint32_t>(group_start + 1);
  }
  if (n > 0 && values[order.front()] == values[order.back()]) {
    throw DataError(fmt::format("all {} values are identical; copula undefined", axis));
  }
  return ranks;
}

}  // namespace

EmpiricalCopula empirical_copula(const PseudoObservations& p) {
  const auto n = p.size();
  if (p.v.size() != n) throw std::invalid_argument("pseudo-observation lengths differ");
  if (n < 2) throw std::invalid_argument("empirical copula needs n >= 2");
  if (n > 0xFFFFFFFEu) throw std::invalid_argument("sample too large");
  const auto xr = min_ranks(p.u, "u");
  const auto yr = min_ranks(p.v, "v");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return xr[a] != xr[b] ? xr[a] < xr[b] : yr[a] < yr[b];
  });
  std::vector<std::uint32_t> xs(n), ys(n);
  for (std::size_t k = 0; k < n; ++k) {
    xs[k] = xr[order[k]];
    ys[k] = yr[order[k]];
  }
  return EmpiricalCopula(std::move(xs), std::move(ys));
}

double copula_value(const EmpiricalCopula& c, std::size_t i, std::size_t j) {
  return static_cast<double>(c.count(i, j)) / static_cast<double>(c.size());
}

}  // namespace dplot
