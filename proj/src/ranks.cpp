#include "dplot/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "dplot/error.hpp"
#include "dplot/rng.hpp"

namespace dplot {

std::string to_string(const TiePolicy& policy) {
  switch (policy.kind) {
    case TiePolicy::Kind::Average: return "average";
    case TiePolicy::Kind::Min: return "min";
    case TiePolicy::Kind::Random: return fmt::format("random({})", policy.seed);
    case TiePolicy::Kind::Error: return "error";
  }
  return "unknown";
}

TiePolicy parse_tie_policy(const std::string& name, std::uint64_t seed) {
  if (name == "avg" || name == "average") return TiePolicy::average();
  if (name == "min") return TiePolicy::min();
  if (name == "random") return TiePolicy::random(seed);
  if (name == "error") return TiePolicy::error();
  throw std::invalid_argument(fmt::format("unknown tie policy '{}'", name));
}

double PseudoObservations::tie_fraction() const noexcept {
  const auto n = size();
  if (n == 0) return 0.0;
  return std::min(1.0, x_ties.fraction(n) + y_ties.fraction(n));
}

PseudoObservations PseudoObservations::swapped() const {
  return PseudoObservations{v, u, policy, y_ties, x_ties};
}

std::vector<double> rank(std::span<const double> values, const TiePolicy& policy,
                         TieReport* report) {
  const auto n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  TieReport ties;
  Rng rng(policy.seed);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && values[order[end]] == values[order[start]]) ++end;
    const auto group = end - start;
    if (group > 1) {
      ++ties.groups;
      ties.tied_values += group;
      if (policy.kind == TiePolicy::Kind::Error) {
        throw DataError(fmt::format("tied values ({}) with tie policy 'error'",
                                    values[order[start]]));
      }
    }
    switch (policy.kind) {
      case TiePolicy::Kind::Average: {
        const double mid = 0.5 * static_cast<double>(start + 1 + end);
        for (auto k = start; k < end; ++k) ranks[order[k]] = mid;
        break;
      }
      case TiePolicy::Kind::Min:
        for (auto k = start; k < end; ++k) ranks[order[k]] = static_cast<double>(start + 1);
        break;
      case TiePolicy::Kind::Random: {
        std::span<std::size_t> members(order.data() + start, group);
        if (group > 1) shuffle(members, rng);
        for (auto k = start; k < end; ++k) ranks[order[k]] = static_cast<double>(k + 1);
        break;
      }
      case TiePolicy::Kind::Error:
        for (auto k = start; k < end; ++k) ranks[order[k]] = static_cast<double>(k + 1);
        break;
    }
    start = end;
  }
  if (report) *report = ties;
  return ranks;
}

PseudoObservations rank_transform(const BivariateSample& s, const TiePolicy& policy) {
  PseudoObservations p;
  p.policy = policy;
  TiePolicy y_policy = policy;
  if (policy.kind == TiePolicy::Kind::Random) {
    y_policy.seed = Rng(policy.seed).split("y-ties").seed();
  }
  p.u = rank(s.x(), policy, &p.x_ties);
  p.v = rank(s.y(), y_policy, &p.y_ties);
  const auto n = static_cast<double>(s.size());
  for (auto& r : p.u) r /= n;
  for (auto& r : p.v) r /= n;
  return p;
}

EmpiricalDistribution::EmpiricalDistribution(std::span<const double> values)
    : sorted_(values.begin(), values.end()) {
  if (sorted_.empty()) throw std::invalid_argument("empirical distribution of no values");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double q) const noexcept {
  const auto count = std::upper_bound(sorted_.begin(), sorted_.end(), q) - sorted_.begin();
  return static_cast<double>(count) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::quantile(double p) const {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument(fmt::format("quantile level {} outside (0, 1]", p));
  }
  const auto n = sorted_.size();
  const auto nd = static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(p * nd));
  k = std::clamp<std::size_t>(k, 1, n);
  // Settle k on the defining inequality k/n >= p under the same rounding.
  while (k > 1 && static_cast<double>(k - 1) / nd >= p) --k;
  while (k < n && static_cast<double>(k) / nd < p) ++k;
  return sorted_[k - 1];
}

double ecdf(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("ecdf of no values");
  std::size_t count = 0;
  for (const double v : values) count += (v <= q) ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(values.size());
}

double empirical_quantile(std::span<const double> values, double p) {
  return EmpiricalDistribution(values).quantile(p);
}

}  // namespace dplot
