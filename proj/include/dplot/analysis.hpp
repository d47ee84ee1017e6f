#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dplot/copula.hpp"
#include "dplot/ingest.hpp"
#include "dplot/ranks.hpp"

namespace dplot {

enum class QuadrantStatus { PQD, NQD, NonQD, NearIndependence };
std::string to_string(QuadrantStatus s);

/// Tolerance for the |sigma_n| ~ |rho_n| comparisons: max(0.02, 2 / sqrt(n)).
double dependence_epsilon(std::size_t n) noexcept;

/// Scale c of the independence threshold c / sqrt(n) on sigma_n. Under the
/// product copula sigma_n * sqrt(n) has mean about 1.48 and exceeds this
/// value in roughly 0.1% to 0.4% of samples (simulated, 100 <= n <= 10000).
inline constexpr double kNullSigmaScale = 3.2;
double null_sigma_threshold(std::size_t n) noexcept;

struct SummaryOptions {
  PermutationTestOptions permutation;
  double alpha = 0.05;
  unsigned threads = 1;
};

struct DependenceSummary {
  MeasurePair measures;
  QuadrantStatus quadrant_status = QuadrantStatus::NearIndependence;
  double independence_p = 1.0;
  std::size_t permutation_n = 0;  // sample size the permutation test used
  double epsilon = 0.0;
  double null_threshold = 0.0;
  std::size_t n = 0;
  double tie_fraction = 0.0;
  bool tie_adjusted = false;
};

/// (rho_n, sigma_n), permutation p-value and quadrant status. `raw`, when
/// given, supplies the sample Pearson correlation.
DependenceSummary summarize_dependence(const PseudoObservations& p, const SummaryOptions& opts,
                                       const BivariateSample* raw = nullptr);

/// Status from measures alone: near-independence when p > alpha, otherwise
/// PQD / NQD when sigma_n - |rho_n| <= epsilon (by the sign of rho_n), else non-QD.
QuadrantStatus quadrant_status(const MeasurePair& m, double p_value, double alpha,
                               double epsilon) noexcept;

enum class DiagonalCurve { Delta, Lambda };
enum class CrossingDirection { AboveToBelow, BelowToAbove };
std::string to_string(DiagonalCurve c);
std::string to_string(CrossingDirection d);

struct Crossing {
  DiagonalCurve curve = DiagonalCurve::Delta;
  double t = 0.0;
  CrossingDirection direction = CrossingDirection::AboveToBelow;
};

struct CrossingOptions {
  /// Minimum run of same-signed grid points on each side; 0 = max(2, m / 32).
  std::size_t min_run = 0;
  /// Half-width of the neutral band around the reference; 0 = 1 / n.
  double noise_floor = 0.0;
};

/// Persistent sign changes of delta_n - t^2 and lambda_n - t (1 - t). Points
/// within the noise floor are neutral and break runs. Requires >= 16 grid
/// points. Crossing locations are linearly interpolated zeros.
std::vector<Crossing> detect_crossings(const DiagonalCurves& d, const CrossingOptions& opts = {});

/// Result of splitting at u <= theta and re-ranking each side.
struct SplitMeasures {
  double theta = 0.0;
  std::size_t left_n = 0;
  std::size_t right_n = 0;
  MeasurePair left;
  MeasurePair right;
  double score = 0.0;  // (sigma_L - |rho_L|) + (sigma_R - |rho_R|)
};

struct GlueOptions {
  /// Candidate gluing points; empty = crossings +- {0, 0.05} plus deciles.
  std::vector<double> grid;
  std::size_t min_side = 20;
  SummaryOptions summary;
  CrossingOptions crossing;
  /// Precomputed crossings of the whole sample; detected when empty.
  std::optional<std::vector<Crossing>> crossings;
};

struct GluingAnalysis {
  std::vector<Crossing> crossings;
  std::vector<SplitMeasures> candidates;
  double unsplit_score = 0.0;  // sigma_n - |rho_n| of the whole sample
  double epsilon = 0.0;
  std::optional<double> best_theta;
  std::optional<double> split_value;  // empirical x-quantile at best_theta
  std::optional<DependenceSummary> left;
  std::optional<DependenceSummary> right;
  std::optional<double> criterion;    // score at best_theta
};

/// Default candidate grid: crossings +- {0, 0.05} plus 0.1 ... 0.9, sorted,
/// deduplicated, restricted to (0, 1).
std::vector<double> default_glue_grid(const std::vector<Crossing>& crossings);

/// Measures on each side of a split at u <= theta. Throws DataError when a
/// side has fewer than `min_side` points or is degenerate.
SplitMeasures split_measures(const PseudoObservations& p, double theta, std::size_t min_side,
                             unsigned threads = 1);

/// Scans candidate gluing points and picks argmin score (ties toward 0.5).
/// best_theta stays empty when the unsplit sample already has
/// sigma_n - |rho_n| <= epsilon or no candidate leaves min_side points per side.
GluingAnalysis glue_scan(const BivariateSample& s, const PseudoObservations& p,
                         const GlueOptions& opts = {});

struct SplitResult {
  BivariateSample left;
  BivariateSample right;
  double split_value;
};

/// Partition into pairs with u_k <= theta and the rest. Throws DataError when
/// either side is empty (or has fewer than 2 pairs).
SplitResult split_at(const BivariateSample& s, const PseudoObservations& p, double theta);

/// Pseudo-observations of the pairs with u_k <= theta (left) or > theta,
/// re-ranked within the subset.
PseudoObservations subset_pseudo(const PseudoObservations& p, double theta, bool left);

// ---------------------------------------------------------------------------
// Rank-plot categories

enum class RankCategory { R1, R2, R3, R4, R5, R6, R7, R8, R9 };
enum class Confidence { Clear, Weak, Ambiguous };
std::string to_string(RankCategory c);
std::string to_string(Confidence c);

struct DensityStats {
  double band_width = 0.2;
  double main_band = 0.0;  // fraction of points with |v - u| <= w
  double anti_band = 0.0;  // fraction of points with |v - (1 - u)| <= w
  double uniform_expectation = 0.0;  // 1 - (1 - w)^2
};

DensityStats density_stats(const PseudoObservations& p, double band_width = 0.2);

struct ClassifyOptions {
  double alpha = 0.05;
  double pure_band = 0.8;     // band mass >= this: pure quadrant dependence
  double mixture_band = 0.45; // band mass in (this, pure_band): mixture
  double band_margin = 0.05;  // band mass this close to a threshold is weak
};

struct RankPlotCategory {
  RankCategory label = RankCategory::R1;
  Confidence confidence = Confidence::Clear;
  std::vector<std::string> evidence;
};

/// Table-driven reading of the rank plot from the dependence summary,
/// diagonal crossings, band masses and (optionally) the gluing scan.
RankPlotCategory classify(const DependenceSummary& summary, const std::vector<Crossing>& crossings,
                          const DensityStats& density, const GluingAnalysis* gluing = nullptr,
                          const ClassifyOptions& opts = {});

// ---------------------------------------------------------------------------
// Full pipeline

struct AnalyzeOptions {
  TiePolicy ties = TiePolicy::average();
  std::optional<std::size_t> max_n = 20000;
  std::uint64_t seed = 0;
  std::size_t permutations = 199;
  std::size_t permutation_max_n = 2000;
  double alpha = 0.05;
  std::size_t diagonal_grid = 0;  // 0 = min(n, 512)
  std::vector<double> glue_grid;
  unsigned threads = 1;
};

struct AnalysisResult {
  BivariateSample sample;  // after any subsampling
  std::size_t input_n = 0;
  PseudoObservations pseudo;
  DependenceSummary summary;
  DiagonalCurves diagonals;
  std::vector<Crossing> crossings;
  GluingAnalysis gluing;
  DensityStats density;
  RankPlotCategory category;
  AnalyzeOptions options;
};

AnalysisResult analyze(const BivariateSample& input, const AnalyzeOptions& opts = {});

}  // namespace dplot
