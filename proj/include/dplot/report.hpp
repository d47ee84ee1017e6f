#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dplot/analysis.hpp"

namespace dplot {

inline constexpr int kReportSchemaVersion = 1;

using Json = nlohmann::ordered_json;

/// The dependence report as JSON. Key order is fixed:
///   schema_version, n, input_n, tie_fraction, tie_policy, tie_adjusted,
///   tie_warning, rho_n, sigma_n, pearson_r, independence_p, permutation,
///   epsilon, null_threshold, quadrant_status, category, crossings, gluing,
///   density, notes, provenance
/// Absent values (pearson_r on constant data, no gluing point) are null.
Json report_json(const AnalysisResult& r);

Json summary_json(const DependenceSummary& s);
Json gluing_json(const GluingAnalysis& g);

/// Serializes with two-space indentation; floating point values carry 17
/// significant digits and always contain '.' or an exponent, so parsing and
/// re-serializing reproduces the same bytes.
std::string serialize(const Json& j);

/// Writes serialize(j) plus a trailing newline. Throws DataError on I/O failure.
void write_report(const Json& j, const std::filesystem::path& path);

}  // namespace dplot
