#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dplot/analysis.hpp"
#include "dplot/error.hpp"
#include "dplot/models.hpp"
#include "dplot/render.hpp"
#include "dplot/report.hpp"

namespace {

using namespace dplot;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInvariant = 4;

ColumnRef column_ref(const std::string& s) {
  if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
    return static_cast<std::size_t>(std::stoull(s));
  }
  return s;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto token = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    const double t = std::stod(token, &used);
    if (used != token.size() || !(t > 0.0 && t < 1.0)) {
      throw std::invalid_argument(fmt::format("grid value '{}' is not in (0, 1)", token));
    }
    out.push_back(t);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct DataArgs {
  std::string csv;
  std::string x = "0";
  std::string y = "1";
  char delimiter = ',';
  bool no_header = false;
};

void add_data_args(CLI::App* cmd, DataArgs& a) {
  cmd->add_option("csv", a.csv, "Input CSV file")->required();
  cmd->add_option("--x", a.x, "X column (header name or zero-based index)");
  cmd->add_option("--y", a.y, "Y column (header name or zero-based index)");
  cmd->add_option("--delimiter", a.delimiter, "Field delimiter");
  cmd->add_flag("--no-header", a.no_header, "First line is data");
}

BivariateSample load(const DataArgs& a) {
  IngestOptions io;
  io.delimiter = a.delimiter;
  io.has_header = !a.no_header;
  io.x_column = column_ref(a.x);
  io.y_column = column_ref(a.y);
  return load_csv(a.csv, io);
}

void print_summary(const AnalysisResult& r) {
  const auto& s = r.summary;
  fmt::print("n = {} (input {})\n", s.n, r.input_n);
  fmt::print("rho_n = {:.4f}  sigma_n = {:.4f}  r_n = {}\n", s.measures.rho_n, s.measures.sigma_n,
             s.measures.pearson_r ? fmt::format("{:.4f}", *s.measures.pearson_r) : "absent");
  fmt::print("independence p = {:.4f} (B = {}, tested n = {})\n", s.independence_p,
             r.options.permutations, s.permutation_n);
  fmt::print("quadrant status: {}\n", to_string(s.quadrant_status));
  for (const auto& c : r.crossings) {
    fmt::print("crossing: {} at t = {:.3f} ({})\n", to_string(c.curve), c.t, to_string(c.direction));
  }
  if (r.gluing.best_theta) {
    fmt::print("gluing point: theta = {:.3f}, split value = {:.6g}\n", *r.gluing.best_theta,
               *r.gluing.split_value);
  }
  fmt::print("category: {} ({})\n", to_string(r.category.label), to_string(r.category.confidence));
  if (s.tie_fraction > kTieWarningFraction) {
    fmt::print(stderr, "warning: tie fraction {:.3f} exceeds {:.2f}\n", s.tie_fraction,
               kTieWarningFraction);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Dependence plots: rank-based dependence summaries and dplot rendering"};
  app.require_subcommand(1);

  // analyze
  DataArgs analyze_data;
  std::size_t max_n = 20000;
  std::uint64_t seed = 0;
  std::size_t permutations = 199;
  double alpha = 0.05;
  std::string ties = "avg";
  std::string svg_out, json_out, zoom_out;
  unsigned threads = 1;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a two-column sample");
  add_data_args(analyze_cmd, analyze_data);
  analyze_cmd->add_option("--max-n", max_n, "Subsample larger inputs to this size");
  analyze_cmd->add_option("--seed", seed, "Seed for subsampling, ties and the permutation test");
  analyze_cmd->add_option("--permutations", permutations, "Permutation count B");
  analyze_cmd->add_option("--alpha", alpha, "Significance level");
  analyze_cmd->add_option("--ties", ties, "Tie policy: avg|min|random|error");
  analyze_cmd->add_option("--svg", svg_out, "Write the dplot SVG here");
  analyze_cmd->add_option("--json", json_out, "Write the JSON report here");
  analyze_cmd->add_option("--diag-zoom", zoom_out, "Write magnified diagonal panels here");
  analyze_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // simulate
  std::string copula_spec = "product";
  std::string margin_x = "uniform";
  std::string margin_y = "uniform";
  std::size_t sim_n = 1000;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  bool mixture = false;
  auto* simulate_cmd = app.add_subcommand("simulate", "Draw a sample from a copula model");
  simulate_cmd->add_option("--copula", copula_spec, "Copula spec, e.g. glue:0.5:frank:-30:frank:30");
  simulate_cmd->add_option("--margin-x", margin_x, "X marginal spec");
  simulate_cmd->add_option("--margin-y", margin_y, "Y marginal spec");
  simulate_cmd->add_option("-n", sim_n, "Sample size")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", sim_seed, "Seed");
  simulate_cmd->add_option("--out", sim_out, "Output CSV")->required();
  simulate_cmd->add_flag("--mixture", mixture,
                         "Use Y = (1-B)(X + e) + B Z with Pareto X, Z instead of a copula");

  // glue-scan
  DataArgs glue_data;
  std::string grid_text;
  std::string glue_json;
  std::uint64_t glue_seed = 0;
  auto* glue_cmd = app.add_subcommand("glue-scan", "Scan candidate gluing points");
  add_data_args(glue_cmd, glue_data);
  glue_cmd->add_option("--grid", grid_text, "Comma separated candidates in (0, 1)");
  glue_cmd->add_option("--json", glue_json, "Write the scan as JSON");
  glue_cmd->add_option("--seed", glue_seed, "Seed for the side permutation tests");

  // gallery
  std::string gallery_out;
  std::size_t gallery_n = 500;
  std::uint64_t gallery_seed = 0;
  auto* gallery_cmd = app.add_subcommand("gallery", "Independence gallery over five marginals");
  gallery_cmd->add_option("--out", gallery_out, "Output directory")->required();
  gallery_cmd->add_option("-n", gallery_n, "Points per panel")->check(CLI::Range(10, 100000));
  gallery_cmd->add_option("--seed", gallery_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*analyze_cmd) {
    AnalyzeOptions opts;
    opts.ties = parse_tie_policy(ties, seed);
    opts.max_n = max_n;
    opts.seed = seed;
    opts.permutations = permutations;
    opts.alpha = alpha;
    opts.threads = threads;
    const auto result = analyze(load(analyze_data), opts);
    print_summary(result);
    if (!svg_out.empty() || !json_out.empty()) {
      const auto doc = render_dplot(result);
      if (!svg_out.empty()) write_text_file(svg_out, doc.svg);
      if (!json_out.empty()) write_report(doc, json_out);
    }
    if (!zoom_out.empty()) {
      write_text_file(zoom_out, render_diagonal_zoom(result.diagonals, result.crossings));
    }
  } else if (*simulate_cmd) {
    Rng rng(sim_seed);
    const auto sample =
        mixture ? mixture_simulator(MixtureEquation{}, sim_n, rng)
                : simulate_bivariate(*parse_copula(copula_spec), parse_marginal(margin_x),
                                     parse_marginal(margin_y), sim_n, rng);
    write_csv(sim_out, sample);
  } else if (*glue_cmd) {
    const auto sample = load(glue_data);
    const auto pseudo = rank_transform(sample, TiePolicy::average());
    GlueOptions go;
    if (!grid_text.empty()) go.grid = parse_grid(grid_text);
    go.summary.permutation.seed = glue_seed;
    const auto g = glue_scan(sample, pseudo, go);
    for (const auto& c : g.candidates) {
      fmt::print("theta {:.3f}  left rho {:+.4f} sigma {:.4f}  right rho {:+.4f} sigma {:.4f}  score {:.4f}\n",
                 c.theta, c.left.rho_n, c.left.sigma_n, c.right.rho_n, c.right.sigma_n, c.score);
    }
    if (g.best_theta) {
      fmt::print("best theta {:.3f}, split value {:.6g}\n", *g.best_theta, *g.split_value);
    } else {
      fmt::print("no gluing point (unsplit score {:.4f} <= epsilon {:.4f} or no admissible split)\n",
                 g.unsplit_score, g.epsilon);
    }
    if (!glue_json.empty()) write_report(gluing_json(g), glue_json);
  } else if (*gallery_cmd) {
    std::filesystem::create_directories(gallery_out);
    const auto margins = gallery_marginals();
    const auto product = CopulaModel::product();
    const Rng root(gallery_seed);
    Json cells = Json::array();
    for (std::size_t i = 0; i < margins.size(); ++i) {
      for (std::size_t j = 0; j < margins.size(); ++j) {
        Rng rng = root.split(static_cast<std::uint64_t>(i * margins.size() + j));
        auto sample = simulate_bivariate(*product, margins[j].second, margins[i].second, gallery_n, rng);
        const auto pseudo = rank_transform(sample, TiePolicy::average());
        const auto m = measures(empirical_copula(pseudo));
        const std::string name = fmt::format("gallery_r{}_c{}.svg", i + 1, j + 1);
        const std::string title =
            fmt::format("X {} / Y {}: rho_n {:.3f}, sigma_n {:.3f}", margins[j].first,
                        margins[i].first, m.rho_n, m.sigma_n);
        write_text_file(std::filesystem::path(gallery_out) / name,
                        render_scatter_pair(sample, pseudo, title));
        cells.push_back({{"file", name},
                         {"row", i + 1},
                         {"col", j + 1},
                         {"x_marginal", margins[j].second.describe()},
                         {"y_marginal", margins[i].second.describe()},
                         {"rho_n", m.rho_n},
                         {"sigma_n", m.sigma_n}});
      }
    }
    Json summary = {{"schema_version", kReportSchemaVersion},
                    {"n", gallery_n},
                    {"seed", gallery_seed},
                    {"copula", product->describe()},
                    {"cells", std::move(cells)}};
    write_report(summary, std::filesystem::path(gallery_out) / "gallery.json");
    fmt::print("wrote 25 panels to {}\n", gallery_out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dplot::DataError& e) {
    fmt::print(stderr, "data error: {}\n", e.what());
    return kExitData;
  } catch (const dplot::InvariantError& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(stderr, "data error: {}\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return kExitInvariant;
  }
}
