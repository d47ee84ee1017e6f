#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dplot/ingest.hpp"
#include "dplot/ranks.hpp"

namespace dplot {

/// Signed 128-bit accumulator for grid sums (|sum| < n^4).
__extension__ using wide_int = __int128;

/// Empirical copula C_n on the grid {0, 1/n, ..., 1}^2.
///
/// Stored implicitly as integer rank pairs ordered by x. For tie-free data
/// x_rank is 1..n and y_rank is the permutation perm[i] = y-rank of the point
/// with x-rank i. With ties both arrays hold minimum ranks, so that
///   n * C_n(i/n, j/n) = #{k : x_rank[k] <= i, y_rank[k] <= j}
/// is exactly the indicator count x_k <= x_(i), y_k <= y_(j).
class EmpiricalCopula {
 public:
  /// From integer ranks in x order; x_rank must be non-decreasing and every
  /// rank in [1, n].
  EmpiricalCopula(std::vector<std::uint32_t> x_rank, std::vector<std::uint32_t> y_rank);

  /// Tie-free copula from a permutation of {1..n}.
  static EmpiricalCopula from_permutation(std::vector<std::uint32_t> perm);

  std::size_t size() const noexcept { return y_rank_.size(); }
  bool tie_adjusted() const noexcept { return tie_adjusted_; }
  std::span<const std::uint32_t> x_rank() const noexcept { return x_rank_; }
  std::span<const std::uint32_t> y_rank() const noexcept { return y_rank_; }

  /// n * C_n(i/n, j/n), an integer in [0, n].
  std::uint32_t count(std::size_t i, std::size_t j) const;
  /// The copula with the roles of the axes exchanged.
  EmpiricalCopula transposed() const;

 private:
  std::vector<std::uint32_t> x_rank_;
  std::vector<std::uint32_t> y_rank_;
  bool tie_adjusted_ = false;
};

/// Builds C_n by sorting on u and reading off ranks of v. Throws DataError
/// when every value on an axis is identical.
EmpiricalCopula empirical_copula(const PseudoObservations& p);

/// C_n(i/n, j/n) for 0 <= i, j <= n. Throws std::out_of_range otherwise.
double copula_value(const EmpiricalCopula& c, std::size_t i, std::size_t j);

/// Integer sums over the n x n grid of d_ij = n * (n C_n(i/n, j/n)) - i j.
struct KernelSums {
  wide_int signed_sum = 0;
  wide_int absolute_sum = 0;
};

/// Row-streaming sweep over C_n: O(n^2) time, O(n) memory per worker.
/// Row blocks run on `threads` workers (0 = hardware concurrency) and are
/// reduced in block order; the result does not depend on the thread count.
KernelSums kernel_sums(const EmpiricalCopula& c, unsigned threads = 1);

/// Converts a grid sum into a normalized measure 12 S / (n^2 (n^2 - 1)).
double normalize_kernel_sum(wide_int sum, std::size_t n);

/// Empirical Spearman concordance rho_n (exact, integer arithmetic, O(n)).
double spearman_rho(const EmpiricalCopula& c);

/// Empirical Schweizer-Wolff dependence sigma_n (exact, O(n^2) sweep).
double schweizer_wolff(const EmpiricalCopula& c, unsigned threads = 1);

/// Sample Pearson correlation; empty when either axis has zero variance.
std::optional<double> pearson_r(const BivariateSample& s);

struct MeasurePair {
  double rho_n = 0.0;
  double sigma_n = 0.0;
  std::optional<double> pearson_r;
};

/// rho_n and sigma_n from a single sweep.
MeasurePair measures(const EmpiricalCopula& c, unsigned threads = 1);

/// Main and secondary diagonal sections of C_n with reference curves.
struct DiagonalCurves {
  std::size_t n = 0;
  std::vector<double> t;
  std::vector<double> delta;       // C_n(t, t)
  std::vector<double> lambda;      // C_n(t, 1 - t)
  std::vector<double> delta_pi;    // t^2
  std::vector<double> lambda_pi;   // t (1 - t)
  std::vector<double> delta_lower; // max(2t - 1, 0)
  std::vector<double> delta_upper; // t
  std::vector<double> lambda_upper;// min(t, 1 - t); lower bound is 0

  std::size_t size() const noexcept { return t.size(); }
};

/// Default grid resolution: min(n, 512).
std::size_t default_diagonal_grid(std::size_t n) noexcept;

/// Samples delta_n and lambda_n at t = k/m, k = 0..m, evaluating C_n at the
/// grid floor (floor(t n)/n). Requires m >= 2.
DiagonalCurves diagonal_sections(const EmpiricalCopula& c, std::size_t m);

struct PermutationTestOptions {
  std::size_t permutations = 199;
  std::uint64_t seed = 0;
  /// Larger inputs are tested on a seeded subsample of this size.
  std::size_t max_n = 2000;
  unsigned threads = 1;
};

struct PermutationTestResult {
  double p_value = 1.0;
  std::size_t permutations = 0;
  std::size_t exceedances = 0;  // permuted sigma >= observed
  std::size_t tested_n = 0;     // sample size the test ran on
};

/// Permutation test of independence on sigma_n:
///   p = (1 + #{b : sigma(permuted_b) >= sigma(observed)}) / (B + 1),
/// permuting the v-ranks with the seeded generator. Requires B >= 19.
PermutationTestResult independence_permutation_test(const PseudoObservations& p,
                                                     const PermutationTestOptions& opts);

}  // namespace dplot
