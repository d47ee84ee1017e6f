#include "dplot/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "dplot/error.hpp"
#include "dplot/rng.hpp"

namespace dplot {

std::string to_string(QuadrantStatus s) {
  switch (s) {
    case QuadrantStatus::PQD: return "PQD";
    case QuadrantStatus::NQD: return "NQD";
    case QuadrantStatus::NonQD: return "non_QD";
    case QuadrantStatus::NearIndependence: return "near_independence";
  }
  return "unknown";
}

std::string to_string(DiagonalCurve c) { return c == DiagonalCurve::Delta ? "delta" : "lambda"; }

std::string to_string(CrossingDirection d) {
  return d == CrossingDirection::AboveToBelow ? "above_to_below" : "below_to_above";
}

double dependence_epsilon(std::size_t n) noexcept {
  return std::max(0.02, 2.0 / std::sqrt(static_cast<double>(n)));
}

double null_sigma_threshold(std::size_t n) noexcept {
  return kNullSigmaScale / std::sqrt(static_cast<double>(n));
}

QuadrantStatus quadrant_status(const MeasurePair& m, double p_value, double alpha,
                               double epsilon) noexcept {
  if (p_value > alpha) return QuadrantStatus::NearIndependence;
  if (m.sigma_n - std::abs(m.rho_n) <= epsilon) {
    return m.rho_n >= 0.0 ? QuadrantStatus::PQD : QuadrantStatus::NQD;
  }
  return QuadrantStatus::NonQD;
}

DependenceSummary summarize_dependence(const PseudoObservations& p, const SummaryOptions& opts,
                                       const BivariateSample* raw) {
  const auto copula = empirical_copula(p);
  DependenceSummary s;
  s.n = p.size();
  s.measures = measures(copula, opts.threads);
  if (raw) s.measures.pearson_r = pearson_r(*raw);
  const auto test = independence_permutation_test(p, opts.permutation);
  s.independence_p = test.p_value;
  s.permutation_n = test.tested_n;
  s.epsilon = dependence_epsilon(s.n);
  s.null_threshold = null_sigma_threshold(s.n);
  s.tie_fraction = p.tie_fraction();
  s.tie_adjusted = copula.tie_adjusted();
  s.quadrant_status = quadrant_status(s.measures, s.independence_p, opts.alpha, s.epsilon);
  return s;
}

namespace {

void crossings_on(const std::vector<double>& t, const std::vector<double>& curve,
                  const std::vector<double>& reference, DiagonalCurve which, double floor,
                  std::size_t min_run, std::vector<Crossing>& out) {
  const auto size = t.size();
  std::vector<double> diff(size);
  std::vector<int> sign(size);
  for (std::size_t k = 0; k < size; ++k) {
    diff[k] = curve[k] - reference[k];
    sign[k] = diff[k] > floor ? 1 : (diff[k] < -floor ? -1 : 0);
  }
  struct Run {
    std::size_t begin, end;  // [begin, end)
    int sign;
  };
  std::vector<Run> runs;
  for (std::size_t k = 0; k < size;) {
    if (sign[k] == 0) {
      ++k;
      continue;
    }
    auto e = k;
    while (e < size && sign[e] == sign[k]) ++e;
    if (e - k >= min_run) runs.push_back({k, e, sign[k]});
    k = e;
  }
  for (std::size_t r = 1; r < runs.size(); ++r) {
    const auto& a = runs[r - 1];
    const auto& b = runs[r];
    if (a.sign == b.sign) continue;
    // Zero of the piecewise linear difference nearest the middle of the gap.
    const auto last = a.end - 1;
    const double middle = 0.5 * (t[last] + t[b.begin]);
    double best = middle;
    double best_distance = std::numeric_limits<double>::infinity();
    for (auto k = last; k < b.begin; ++k) {
      const double d0 = diff[k];
      const double d1 = diff[k + 1];
      const bool crosses = (d0 > 0.0 && d1 <= 0.0) || (d0 < 0.0 && d1 >= 0.0);
      if (!crosses) continue;
      const double z = t[k] + (t[k + 1] - t[k]) * d0 / (d0 - d1);
      if (std::abs(z - middle) < best_distance) {
        best_distance = std::abs(z - middle);
        best = z;
      }
    }
    out.push_back({which, best,
                   a.sign > 0 ? CrossingDirection::AboveToBelow
                              : CrossingDirection::BelowToAbove});
  }
}

}  // namespace

std::vector<Crossing> detect_crossings(const DiagonalCurves& d, const CrossingOptions& opts) {
  if (d.size() < 16) throw std::invalid_argument("crossing detection needs >= 16 grid points");
  const auto m = d.size() - 1;
  const auto min_run = opts.min_run > 0 ? opts.min_run : std::max<std::size_t>(2, m / 32);
  const double floor =
      opts.noise_floor > 0.0 ? opts.noise_floor : 1.0 / static_cast<double>(std::max<std::size_t>(d.n, 1));
  std::vector<Crossing> out;
  crossings_on(d.t, d.delta, d.delta_pi, DiagonalCurve::Delta, floor, min_run, out);
  crossings_on(d.t, d.lambda, d.lambda_pi, DiagonalCurve::Lambda, floor, min_run, out);
  return out;
}

std::vector<double> default_glue_grid(const std::vector<Crossing>& crossings) {
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(k / 10.0);
  for (const auto& c : crossings) {
    for (const double offset : {-0.05, 0.0, 0.05}) grid.push_back(c.t + offset);
  }
  std::erase_if(grid, [](double t) { return !(t > 0.0 && t < 1.0); });
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-9; }),
             grid.end());
  return grid;
}

PseudoObservations subset_pseudo(const PseudoObservations& p, double theta, bool left) {
  std::vector<double> u, v;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if ((p.u[k] <= theta) == left) {
      u.push_back(p.u[k]);
      v.push_back(p.v[k]);
    }
  }
  PseudoObservations out;
  out.policy = TiePolicy::average();
  if (u.empty()) return out;
  out.u = rank(u, out.policy, &out.x_ties);
  out.v = rank(v, out.policy, &out.y_ties);
  const auto m = static_cast<double>(u.size());
  for (auto& r : out.u) r /= m;
  for (auto& r : out.v) r /= m;
  return out;
}

SplitMeasures split_measures(const PseudoObservations& p, double theta, std::size_t min_side,
                             unsigned threads) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument(fmt::format("gluing point {} outside (0, 1)", theta));
  }
  const auto left = subset_pseudo(p, theta, true);
  const auto right = subset_pseudo(p, theta, false);
  const auto need = std::max<std::size_t>(min_side, 2);
  if (left.size() < need || right.size() < need) {
    throw DataError(fmt::format("split at {} leaves {} | {} points (need {} per side)", theta,
                                left.size(), right.size(), need));
  }
  SplitMeasures out;
  out.theta = theta;
  out.left_n = left.size();
  out.right_n = right.size();
  out.left = measures(empirical_copula(left), threads);
  out.right = measures(empirical_copula(right), threads);
  out.score = (out.left.sigma_n - std::abs(out.left.rho_n)) +
              (out.right.sigma_n - std::abs(out.right.rho_n));
  return out;
}

GluingAnalysis glue_scan(const BivariateSample& s, const PseudoObservations& p,
                         const GlueOptions& opts) {
  const auto threads = opts.summary.threads;
  const auto copula = empirical_copula(p);
  const auto whole = measures(copula, threads);

  GluingAnalysis g;
  g.epsilon = dependence_epsilon(p.size());
  g.unsplit_score = whole.sigma_n - std::abs(whole.rho_n);
  if (opts.crossings) {
    g.crossings = *opts.crossings;
  } else {
    const auto m = std::max<std::size_t>(default_diagonal_grid(p.size()), 16);
    g.crossings = detect_crossings(diagonal_sections(copula, m), opts.crossing);
  }

  const bool explicit_grid = !opts.grid.empty();
  const auto grid = explicit_grid ? opts.grid : default_glue_grid(g.crossings);
  for (const double theta : grid) {
    if (explicit_grid) {
      g.candidates.push_back(split_measures(p, theta, opts.min_side, threads));
      continue;
    }
    const auto left_n = static_cast<std::size_t>(
        std::count_if(p.u.begin(), p.u.end(), [&](double u) { return u <= theta; }));
    if (left_n < opts.min_side || p.size() - left_n < opts.min_side) continue;
    try {
      g.candidates.push_back(split_measures(p, theta, opts.min_side, threads));
    } catch (const DataError&) {
      // degenerate side (e.g. all tied); not a usable candidate
    }
  }

  const SplitMeasures* best = nullptr;
  for (const auto& c : g.candidates) {
    if (!best || c.score < best->score - 1e-12) {
      best = &c;
    } else if (std::abs(c.score - best->score) <= 1e-12) {
      const double dc = std::abs(c.theta - 0.5);
      const double db = std::abs(best->theta - 0.5);
      if (dc < db - 1e-12 || (std::abs(dc - db) <= 1e-12 && c.theta < best->theta)) best = &c;
    }
  }
  if (!best || g.unsplit_score <= g.epsilon) return g;

  g.best_theta = best->theta;
  g.criterion = best->score;
  g.split_value = empirical_quantile(s.x(), best->theta);
  const Rng root(opts.summary.permutation.seed);
  for (const bool left : {true, false}) {
    SummaryOptions side = opts.summary;
    side.permutation.seed = root.split(left ? "left" : "right").seed();
    auto summary = summarize_dependence(subset_pseudo(p, best->theta, left), side);
    (left ? g.left : g.right) = summary;
  }
  return g;
}

SplitResult split_at(const BivariateSample& s, const PseudoObservations& p, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument(fmt::format("split point {} outside (0, 1)", theta));
  }
  if (s.size() != p.size()) throw std::invalid_argument("sample and pseudo-observations differ");
  std::vector<std::size_t> left, right;
  for (std::size_t k = 0; k < p.size(); ++k) (p.u[k] <= theta ? left : right).push_back(k);
  if (left.size() < 2 || right.size() < 2) {
    throw DataError(fmt::format("split at {} leaves {} | {} pairs", theta, left.size(),
                                right.size()));
  }
  return {s.select(left), s.select(right), empirical_quantile(s.x(), theta)};
}

}  // namespace dplot
