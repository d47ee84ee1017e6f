#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dplot/ingest.hpp"

namespace dplot {

/// How tied values share ranks.
struct TiePolicy {
  enum class Kind { Average, Min, Random, Error };
  Kind kind = Kind::Average;
  std::uint64_t seed = 0;  // Random only

  static TiePolicy average() { return {Kind::Average, 0}; }
  static TiePolicy min() { return {Kind::Min, 0}; }
  static TiePolicy random(std::uint64_t seed) { return {Kind::Random, seed}; }
  static TiePolicy error() { return {Kind::Error, 0}; }

  friend bool operator==(const TiePolicy&, const TiePolicy&) = default;
};

std::string to_string(const TiePolicy& policy);
/// Accepts "avg"/"average", "min", "random", "error".
TiePolicy parse_tie_policy(const std::string& name, std::uint64_t seed);

struct TieReport {
  std::size_t groups = 0;       // tie groups of size >= 2
  std::size_t tied_values = 0;  // observations inside such groups
  double fraction(std::size_t n) const noexcept {
    return n == 0 ? 0.0 : static_cast<double>(tied_values) / static_cast<double>(n);
  }
  friend bool operator==(const TieReport&, const TieReport&) = default;
};

/// Above this fraction of tied observations a report carries a warning.
inline constexpr double kTieWarningFraction = 0.05;

/// Rank-scaled pairs (u_k, v_k) = (rank(x_k)/n, rank(y_k)/n): the rank plot.
struct PseudoObservations {
  std::vector<double> u;
  std::vector<double> v;
  TiePolicy policy;
  TieReport x_ties;
  TieReport y_ties;

  std::size_t size() const noexcept { return u.size(); }
  bool has_ties() const noexcept { return x_ties.groups > 0 || y_ties.groups > 0; }
  /// Fraction of observations tied on at least one axis (upper bound: sum of axes).
  double tie_fraction() const noexcept;
  PseudoObservations swapped() const;

  friend bool operator==(const PseudoObservations&, const PseudoObservations&) = default;
};

/// 1-based ranks of `values` under `policy`. Average ranks may be half-integers.
/// Throws DataError when ties are present and policy is Error.
std::vector<double> rank(std::span<const double> values, const TiePolicy& policy,
                         TieReport* report = nullptr);

PseudoObservations rank_transform(const BivariateSample& s,
                                  const TiePolicy& policy = TiePolicy::average());

/// (1/n) #{k : values_k <= q}. Sorts a copy; use EmpiricalDistribution for repeated queries.
double ecdf(std::span<const double> values, double q);

/// Smallest order statistic x_(k) with k/n >= p, for p in (0, 1].
double empirical_quantile(std::span<const double> values, double p);

/// Sorted view of a sample for repeated ECDF and quantile queries.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::span<const double> values);
  double cdf(double q) const noexcept;
  double quantile(double p) const;
  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

}  // namespace dplot
