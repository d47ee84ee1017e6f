#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dplot/analysis.hpp"

namespace dplot {

// ---------------------------------------------------------------------------
// Marginal summaries

struct BinRule {
  enum class Kind { FreedmanDiaconis, Sturges, Fixed };
  Kind kind = Kind::FreedmanDiaconis;
  std::size_t bins = 0;  // Fixed only

  static BinRule fd() { return {Kind::FreedmanDiaconis, 0}; }
  static BinRule sturges() { return {Kind::Sturges, 0}; }
  static BinRule fixed(std::size_t k) { return {Kind::Fixed, k}; }
};

/// Upper limit on rule-derived bin counts (heavy tails can ask for thousands).
inline constexpr std::size_t kMaxHistogramBins = 100;

struct HistogramSpec {
  std::vector<double> bin_edges;      // strictly increasing, counts.size() + 1 entries
  std::vector<std::size_t> counts;
  std::optional<std::string> warning;

  std::size_t total() const noexcept;
};

/// Freedman-Diaconis bin count ceil(range / (2 IQR n^{-1/3})), uncapped; 0 when IQR is 0.
std::size_t freedman_diaconis_bins(std::span<const double> values);

/// Equal-width histogram over [min, max]. FD by default, falling back to
/// Sturges when the IQR is 0; constant data gives one degenerate bin.
HistogramSpec histogram(std::span<const double> values, BinRule rule = BinRule::fd());

struct BoxStats {
  double min_whisker = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max_whisker = 0.0;
  std::vector<double> outliers;  // ascending
};

/// Tukey box plot with left-continuous quartiles; needs at least 5 values.
BoxStats boxplot_stats(std::span<const double> values);

// ---------------------------------------------------------------------------
// SVG

struct DplotConfig {
  double panel_size = 240.0;
  double panel_gap = 12.0;
  double plot_margin = 28.0;
  double title_height = 28.0;
  std::string font_family = "Helvetica, Arial, sans-serif";
  double font_size = 10.0;
  double point_opacity = 0.6;
  std::string point_color = "#1f4e79";
  std::string curve_color = "#c0392b";
  std::string reference_color = "#555555";
  std::string bound_color = "#999999";
  std::string positive_bar_color = "#000000";
  std::string negative_bar_color = "#f5c400";
  std::string histogram_color = "#7f9cb8";
  std::string title;
  BinRule bins = BinRule::fd();
};

/// Marker radius clamp(1.2, 60 / sqrt(n), 3.0).
double marker_radius(std::size_t n) noexcept;

/// Fill colour of the |rho_n| bar: negative colour iff rho_n < 0.
const std::string& rho_bar_color(double rho_n, const DplotConfig& config);

struct PanelPlacement {
  std::string id;
  std::size_t row = 0;
  std::size_t col = 0;
};

/// Fixed 3x3 arrangement: Y box | rank plot | delta / Y histogram | scatter |
/// lambda / bars | X histogram | X box.
const std::array<PanelPlacement, 9>& dplot_layout();

struct DplotDocument {
  std::array<PanelPlacement, 9> panels;
  std::string svg;
  std::string report_json;
};

/// Renders the nine-panel dependence plot and its JSON report. Output bytes
/// depend only on the inputs and config.
DplotDocument render_dplot(const AnalysisResult& analysis, const DplotConfig& config = {});

/// The delta_n - t^2 and lambda_n - t (1 - t) curves on a magnified scale.
std::string render_diagonal_zoom(const DiagonalCurves& d, const std::vector<Crossing>& crossings,
                                 const DplotConfig& config = {});

/// Single rank-plot/scatter pair used by the independence gallery.
std::string render_scatter_pair(const BivariateSample& s, const PseudoObservations& p,
                                const std::string& title, const DplotConfig& config = {});

/// Writes the document's JSON report.
void write_report(const DplotDocument& doc, const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dplot
