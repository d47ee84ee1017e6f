#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "dplot/ranks.hpp"
#include "dplot/render.hpp"

namespace dplot {

std::size_t HistogramSpec::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::size_t freedman_diaconis_bins(std::span<const double> values) {
  const EmpiricalDistribution dist(values);
  const double iqr = dist.quantile(0.75) - dist.quantile(0.25);
  if (!(iqr > 0.0)) return 0;
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(values.size()));
  const double range = dist.sorted().back() - dist.sorted().front();
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(range / width)));
}

HistogramSpec histogram(std::span<const double> values, BinRule rule) {
  if (values.empty()) throw std::invalid_argument("histogram of no values");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  HistogramSpec h;
  if (!(hi > lo)) {
    h.bin_edges = {lo - 0.5, lo + 0.5};
    h.counts = {values.size()};
    h.warning = "constant data: single degenerate bin";
    return h;
  }

  const auto sturges = [&] {
    return static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(values.size())))) + 1;
  };
  std::size_t bins = 0;
  switch (rule.kind) {
    case BinRule::Kind::Fixed:
      if (rule.bins == 0) throw std::invalid_argument("fixed histogram needs >= 1 bin");
      bins = rule.bins;
      break;
    case BinRule::Kind::Sturges:
      bins = sturges();
      break;
    case BinRule::Kind::FreedmanDiaconis:
      bins = freedman_diaconis_bins(values);
      if (bins == 0) {
        bins = sturges();
        h.warning = "zero IQR: Sturges rule used";
      }
      break;
  }
  if (rule.kind != BinRule::Kind::Fixed && bins > kMaxHistogramBins) {
    h.warning = fmt::format("bin count {} capped at {}", bins, kMaxHistogramBins);
    bins = kMaxHistogramBins;
  }

  h.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    h.bin_edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  }
  h.bin_edges.back() = hi;
  h.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (const double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    b = std::min(b, bins - 1);
    // Settle rounding at the edges so each value lands in [edge_b, edge_b+1).
    while (b > 0 && v < h.bin_edges[b]) --b;
    while (b + 1 < bins && v >= h.bin_edges[b + 1]) ++b;
    ++h.counts[b];
  }
  return h;
}

BoxStats boxplot_stats(std::span<const double> values) {
  if (values.size() < 5) {
    throw std::invalid_argument(fmt::format("box plot needs >= 5 values, got {}", values.size()));
  }
  const EmpiricalDistribution dist(values);
  BoxStats b;
  b.q1 = dist.quantile(0.25);
  b.median = dist.quantile(0.5);
  b.q3 = dist.quantile(0.75);
  const double iqr = b.q3 - b.q1;
  const double low_fence = b.q1 - 1.5 * iqr;
  const double high_fence = b.q3 + 1.5 * iqr;
  b.min_whisker = b.q1;
  b.max_whisker = b.q3;
  bool low_set = false;
  for (const double v : dist.sorted()) {
    if (v < low_fence || v > high_fence) {
      b.outliers.push_back(v);
      continue;
    }
    if (!low_set) {
      b.min_whisker = v;
      low_set = true;
    }
    b.max_whisker = v;
  }
  return b;
}

}  // namespace dplot
