#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dplot/analysis.hpp"
#include "dplot/rng.hpp"

namespace dplot {

std::string to_string(RankCategory c) {
  return fmt::format("R{}", static_cast<int>(c) + 1);
}

std::string to_string(Confidence c) {
  switch (c) {
    case Confidence::Clear: return "clear";
    case Confidence::Weak: return "weak";
    case Confidence::Ambiguous: return "ambiguous";
  }
  return "unknown";
}

DensityStats density_stats(const PseudoObservations& p, double band_width) {
  DensityStats d;
  d.band_width = band_width;
  d.uniform_expectation = 1.0 - (1.0 - band_width) * (1.0 - band_width);
  std::size_t main = 0, anti = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    main += std::abs(p.v[k] - p.u[k]) <= band_width ? 1 : 0;
    anti += std::abs(p.v[k] - (1.0 - p.u[k])) <= band_width ? 1 : 0;
  }
  const auto n = static_cast<double>(std::max<std::size_t>(p.size(), 1));
  d.main_band = static_cast<double>(main) / n;
  d.anti_band = static_cast<double>(anti) / n;
  return d;
}

namespace {

void downgrade(RankPlotCategory& c, Confidence to) {
  if (static_cast<int>(to) > static_cast<int>(c.confidence)) c.confidence = to;
}

// Pure (R2/R3) versus mixture with independence (R5/R6) by band mass.
void quadrant_label(RankPlotCategory& c, bool positive, double band, const ClassifyOptions& o) {
  const auto pure = positive ? RankCategory::R2 : RankCategory::R3;
  const auto mixture = positive ? RankCategory::R5 : RankCategory::R6;
  const char* diagonal = positive ? "v=u" : "v=1-u";
  if (band >= o.pure_band) {
    c.label = pure;
    c.evidence.push_back(fmt::format("{:.3f} of points within the {} band (>= {:.2f}): pure",
                                     band, diagonal, o.pure_band));
  } else if (band > o.mixture_band) {
    c.label = mixture;
    c.evidence.push_back(
        fmt::format("{:.3f} of points within the {} band (between {:.2f} and {:.2f}): mixture "
                    "with independence",
                    band, diagonal, o.mixture_band, o.pure_band));
  } else {
    c.label = pure;
    downgrade(c, Confidence::Weak);
    c.evidence.push_back(fmt::format(
        "only {:.3f} of points within the {} band: weak quadrant dependence", band, diagonal));
  }
  if (std::abs(band - o.pure_band) < o.band_margin ||
      std::abs(band - o.mixture_band) < o.band_margin) {
    downgrade(c, Confidence::Weak);
    c.evidence.push_back("band mass close to a category threshold");
  }
}

}  // namespace

RankPlotCategory classify(const DependenceSummary& summary, const std::vector<Crossing>& crossings,
                          const DensityStats& density, const GluingAnalysis* gluing,
                          const ClassifyOptions& opts) {
  RankPlotCategory c;
  const auto& m = summary.measures;
  const double eps = summary.epsilon;
  const double gap = m.sigma_n - std::abs(m.rho_n);
  c.evidence.push_back(fmt::format("rho_n={:.4f} sigma_n={:.4f} epsilon={:.4f} status={}",
                                   m.rho_n, m.sigma_n, eps, to_string(summary.quadrant_status)));
  c.evidence.push_back(fmt::format("independence p={:.4f} (alpha={:.2f}); sigma null threshold {:.4f}",
                                   summary.independence_p, opts.alpha, summary.null_threshold));

  // (1) independence
  if (summary.independence_p > opts.alpha) {
    c.label = RankCategory::R1;
    if (m.sigma_n >= summary.null_threshold) {
      downgrade(c, Confidence::Weak);
      c.evidence.push_back("sigma_n above the null threshold despite a large p-value");
    } else if (summary.independence_p <= 2.0 * opts.alpha) {
      downgrade(c, Confidence::Weak);
      c.evidence.push_back("p-value close to alpha");
    }
    return c;
  }

  // (2) quadrant dependence
  if (summary.quadrant_status == QuadrantStatus::PQD ||
      summary.quadrant_status == QuadrantStatus::NQD) {
    const bool positive = summary.quadrant_status == QuadrantStatus::PQD;
    quadrant_label(c, positive, positive ? density.main_band : density.anti_band, opts);
    if (m.sigma_n < summary.null_threshold + 2.0 * eps) {
      downgrade(c, Confidence::Weak);
      c.evidence.push_back("sigma_n within 2 epsilon of the independence threshold");
    }
    if (!crossings.empty()) {
      downgrade(c, Confidence::Weak);
      c.evidence.push_back(fmt::format(
          "{} diagonal crossing(s) despite |sigma_n - |rho_n|| <= epsilon", crossings.size()));
    }
    return c;
  }

  // (3) non-quadrant dependence with a crossing: gluing
  if (!crossings.empty()) {
    const Crossing* chosen = &crossings.front();
    const double target =
        gluing && gluing->best_theta ? *gluing->best_theta : crossings.front().t;
    for (const auto& x : crossings) {
      if (std::abs(x.t - target) < std::abs(chosen->t - target)) chosen = &x;
    }
    c.evidence.push_back(fmt::format("{} crossing at t={:.3f} ({})", to_string(chosen->curve),
                                     chosen->t, to_string(chosen->direction)));
    const bool pqd_first = chosen->direction == CrossingDirection::AboveToBelow;
    c.label = pqd_first ? RankCategory::R7 : RankCategory::R8;

    if (gluing && gluing->left && gluing->right) {
      const auto& left = *gluing->left;
      const auto& right = *gluing->right;
      c.evidence.push_back(fmt::format(
          "split at theta={:.3f}: left rho={:.3f} sigma={:.3f}; right rho={:.3f} sigma={:.3f}",
          *gluing->best_theta, left.measures.rho_n, left.measures.sigma_n, right.measures.rho_n,
          right.measures.sigma_n));
      const bool left_indep = left.quadrant_status == QuadrantStatus::NearIndependence;
      const bool right_indep = right.quadrant_status == QuadrantStatus::NearIndependence;
      if (left_indep != right_indep) {
        c.label = RankCategory::R9;
        c.evidence.push_back(fmt::format("{} side indistinguishable from independence",
                                         left_indep ? "left" : "right"));
      } else if (left_indep && right_indep) {
        downgrade(c, Confidence::Ambiguous);
        c.evidence.push_back("both sides indistinguishable from independence");
      } else {
        const bool consistent = pqd_first ? (left.measures.rho_n > 0.0 && right.measures.rho_n < 0.0)
                                          : (left.measures.rho_n < 0.0 && right.measures.rho_n > 0.0);
        if (!consistent) {
          downgrade(c, Confidence::Weak);
          c.evidence.push_back("side concordance signs disagree with the crossing direction");
        }
      }
    } else {
      downgrade(c, Confidence::Weak);
      c.evidence.push_back("no gluing point confirmed by the split scan");
    }
    if (gap < 2.0 * eps) {
      downgrade(c, Confidence::Weak);
      c.evidence.push_back("sigma_n - |rho_n| within 2 epsilon of the quadrant boundary");
    }
    return c;
  }

  // (4) non-quadrant dependence without a reliable crossing: convex combination
  c.label = RankCategory::R4;
  c.evidence.push_back("sigma_n - |rho_n| > epsilon with no persistent diagonal crossing");
  if (gluing && gluing->best_theta && gluing->criterion && *gluing->criterion <= 2.0 * eps) {
    downgrade(c, Confidence::Ambiguous);
    c.evidence.push_back(fmt::format(
        "a split at theta={:.3f} leaves both sides near quadrant dependence; gluing not excluded",
        *gluing->best_theta));
  } else if (gap < 2.0 * eps) {
    downgrade(c, Confidence::Weak);
    c.evidence.push_back("sigma_n - |rho_n| within 2 epsilon of the quadrant boundary");
  }
  return c;
}

AnalysisResult analyze(const BivariateSample& input, const AnalyzeOptions& opts) {
  const Rng root(opts.seed);
  auto sample = (opts.max_n && input.size() > *opts.max_n)
                    ? subsample(input, *opts.max_n, root.split("subsample").seed())
                    : input;
  AnalysisResult r{std::move(sample), input.size(), {}, {}, {}, {}, {}, {}, {}, opts};
  r.pseudo = rank_transform(r.sample, opts.ties);

  SummaryOptions summary_opts;
  summary_opts.alpha = opts.alpha;
  summary_opts.threads = opts.threads;
  summary_opts.permutation.permutations = opts.permutations;
  summary_opts.permutation.seed = root.split("permutation").seed();
  summary_opts.permutation.max_n = opts.permutation_max_n;
  summary_opts.permutation.threads = opts.threads;
  r.summary = summarize_dependence(r.pseudo, summary_opts, &r.sample);

  const auto copula = empirical_copula(r.pseudo);
  const auto m = opts.diagonal_grid > 0 ? opts.diagonal_grid
                                        : std::max<std::size_t>(default_diagonal_grid(r.sample.size()), 16);
  r.diagonals = diagonal_sections(copula, m);
  r.crossings = detect_crossings(r.diagonals);

  GlueOptions glue;
  glue.grid = opts.glue_grid;
  glue.summary = summary_opts;
  glue.summary.permutation.seed = root.split("gluing").seed();
  glue.crossings = r.crossings;
  r.gluing = glue_scan(r.sample, r.pseudo, glue);

  r.density = density_stats(r.pseudo);
  ClassifyOptions classify_opts;
  classify_opts.alpha = opts.alpha;
  r.category = classify(r.summary, r.crossings, r.density, &r.gluing, classify_opts);
  return r;
}

}  // namespace dplot
