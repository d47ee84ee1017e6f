#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dplot {

/// Paired raw observations (x_k, y_k). Always holds n >= 2 finite pairs.
class BivariateSample {
 public:
  BivariateSample(std::vector<double> x, std::vector<double> y,
                  std::string x_label = "x", std::string y_label = "y");

  std::size_t size() const noexcept { return x_.size(); }
  const std::vector<double>& x() const noexcept { return x_; }
  const std::vector<double>& y() const noexcept { return y_; }
  const std::string& x_label() const noexcept { return x_label_; }
  const std::string& y_label() const noexcept { return y_label_; }

  /// Pairs at the given row indices, in the order given.
  BivariateSample select(const std::vector<std::size_t>& rows) const;
  /// Same pairs with the roles of x and y exchanged.
  BivariateSample swapped() const;

  friend bool operator==(const BivariateSample&, const BivariateSample&) = default;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::string x_label_;
  std::string y_label_;
};

enum class NaPolicy { DropRow, Error };

/// A column given by header name or by zero-based position.
using ColumnRef = std::variant<std::string, std::size_t>;

struct IngestOptions {
  char delimiter = ',';
  bool has_header = true;
  ColumnRef x_column = std::size_t{0};
  ColumnRef y_column = std::size_t{1};
  NaPolicy na_policy = NaPolicy::DropRow;
  std::optional<std::size_t> max_n;
  std::uint64_t seed = 0;
};

/// Parses a delimited text file. Quoted fields ("a,b", "" escapes) are
/// supported. Empty cells, NA-like tokens, non-numeric and non-finite cells
/// count as missing and are handled per `na_policy`. When `max_n` is set and
/// exceeded, the result is subsampled with `seed`.
BivariateSample load_csv(const std::filesystem::path& path, const IngestOptions& opts);

/// Same as load_csv, on in-memory text.
BivariateSample parse_csv(std::string_view text, const IngestOptions& opts);

/// Uniform subsample of `n` pairs without replacement. Uses a seeded
/// Fisher-Yates prefix over row indices; the chosen rows keep their original
/// relative order. n == s.size() returns the sample unchanged.
BivariateSample subsample(const BivariateSample& s, std::size_t n, std::uint64_t seed);

/// Row indices picked by subsample(), ascending.
std::vector<std::size_t> subsample_rows(std::size_t total, std::size_t n, std::uint64_t seed);

/// Writes a two-column CSV with a header line; values use 17 significant digits.
void write_csv(const std::filesystem::path& path, const BivariateSample& s);

}  // namespace dplot
