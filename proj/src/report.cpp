#include <cmath>
#include <cstdio>
#include <cstring>

#include <fmt/format.h>

#include "dplot/error.hpp"
#include "dplot/render.hpp"
#include "dplot/report.hpp"

namespace dplot {
namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json measures_json(const MeasurePair& m) {
  Json j;
  j["rho_n"] = m.rho_n;
  j["sigma_n"] = m.sigma_n;
  j["pearson_r"] = optional_number(m.pearson_r);
  return j;
}

Json crossing_json(const Crossing& c) {
  Json j;
  j["curve"] = to_string(c.curve);
  j["t"] = c.t;
  j["direction"] = to_string(c.direction);
  return j;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void emit(const Json& j, std::string& out, int depth) {
  const auto pad = [&](int d) { out.append(static_cast<std::size_t>(2 * d), ' '); };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        pad(depth + 1);
        out += Json(it.key()).dump();
        out += ": ";
        emit(it.value(), out, depth + 1);
      }
      out += "\n";
      pad(depth);
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",\n";
        pad(depth + 1);
        emit(j[k], out, depth + 1);
      }
      out += "\n";
      pad(depth);
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

Json summary_json(const DependenceSummary& s) {
  Json j;
  j["n"] = s.n;
  j["rho_n"] = s.measures.rho_n;
  j["sigma_n"] = s.measures.sigma_n;
  j["pearson_r"] = optional_number(s.measures.pearson_r);
  j["independence_p"] = s.independence_p;
  j["permutation_n"] = s.permutation_n;
  j["epsilon"] = s.epsilon;
  j["null_threshold"] = s.null_threshold;
  j["quadrant_status"] = to_string(s.quadrant_status);
  j["tie_fraction"] = s.tie_fraction;
  j["tie_adjusted"] = s.tie_adjusted;
  return j;
}

Json gluing_json(const GluingAnalysis& g) {
  Json j;
  j["best_theta"] = optional_number(g.best_theta);
  j["split_value"] = optional_number(g.split_value);
  j["criterion"] = optional_number(g.criterion);
  j["unsplit_score"] = g.unsplit_score;
  j["epsilon"] = g.epsilon;
  j["left"] = g.left ? summary_json(*g.left) : Json(nullptr);
  j["right"] = g.right ? summary_json(*g.right) : Json(nullptr);
  Json candidates = Json::array();
  for (const auto& c : g.candidates) {
    Json e;
    e["theta"] = c.theta;
    e["left_n"] = c.left_n;
    e["right_n"] = c.right_n;
    e["left"] = measures_json(c.left);
    e["right"] = measures_json(c.right);
    e["score"] = c.score;
    candidates.push_back(std::move(e));
  }
  j["candidates"] = std::move(candidates);
  return j;
}

Json report_json(const AnalysisResult& r) {
  const auto& s = r.summary;
  const auto& o = r.options;
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["n"] = s.n;
  j["input_n"] = r.input_n;
  j["x_label"] = r.sample.x_label();
  j["y_label"] = r.sample.y_label();
  j["tie_fraction"] = s.tie_fraction;
  j["tie_policy"] = to_string(r.pseudo.policy);
  j["tie_adjusted"] = s.tie_adjusted;
  j["tie_warning"] = s.tie_fraction > kTieWarningFraction;
  j["rho_n"] = s.measures.rho_n;
  j["sigma_n"] = s.measures.sigma_n;
  j["pearson_r"] = optional_number(s.measures.pearson_r);
  j["independence_p"] = s.independence_p;
  j["permutation"] = {{"permutations", o.permutations}, {"tested_n", s.permutation_n}};
  j["epsilon"] = s.epsilon;
  j["null_threshold"] = s.null_threshold;
  j["quadrant_status"] = to_string(s.quadrant_status);
  Json evidence = Json::array();
  for (const auto& e : r.category.evidence) evidence.push_back(e);
  j["category"] = {{"label", to_string(r.category.label)},
                   {"confidence", to_string(r.category.confidence)},
                   {"evidence", std::move(evidence)}};
  Json crossings = Json::array();
  for (const auto& c : r.crossings) crossings.push_back(crossing_json(c));
  j["crossings"] = std::move(crossings);
  j["gluing"] = gluing_json(r.gluing);
  j["density"] = {{"band_width", r.density.band_width},
                  {"main_band", r.density.main_band},
                  {"anti_band", r.density.anti_band},
                  {"uniform_expectation", r.density.uniform_expectation}};
  Json notes = Json::array();
  notes.push_back("near_independence uses a seeded permutation test on sigma_n; this threshold is an operational choice");
  notes.push_back("category thresholds on band mass and epsilon are heuristic");
  if (s.tie_adjusted) {
    notes.push_back("tie-adjusted: ties are counted with min-ranks; copula-theoretic exactness assumes continuous margins");
  }
  if (s.tie_fraction > kTieWarningFraction) {
    notes.push_back(fmt::format("tie fraction {:.3f} exceeds {:.2f}", s.tie_fraction,
                                kTieWarningFraction));
  }
  if (s.permutation_n < s.n) {
    notes.push_back(fmt::format("permutation test ran on a seeded subsample of {} pairs", s.permutation_n));
  }
  if (r.input_n > s.n) {
    notes.push_back(fmt::format("input subsampled from {} to {} pairs", r.input_n, s.n));
  }
  j["notes"] = std::move(notes);
  Json grid = Json::array();
  for (const double t : o.glue_grid) grid.push_back(t);
  j["provenance"] = {{"seed", o.seed},
                     {"options",
                      {{"ties", to_string(o.ties)},
                       {"max_n", o.max_n ? Json(*o.max_n) : Json(nullptr)},
                       {"permutations", o.permutations},
                       {"permutation_max_n", o.permutation_max_n},
                       {"alpha", o.alpha},
                       {"diagonal_grid", r.diagonals.size() ? r.diagonals.size() - 1 : 0},
                       {"glue_grid", std::move(grid)}}}};
  return j;
}

std::string serialize(const Json& j) {
  std::string out;
  emit(j, out, 0);
  return out;
}

void write_report(const Json& j, const std::filesystem::path& path) {
  write_text_file(path, serialize(j) + "\n");
}

}  // namespace dplot
