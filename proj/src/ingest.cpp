#include "dplot/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "dplot/error.hpp"
#include "dplot/rng.hpp"

namespace dplot {

BivariateSample::BivariateSample(std::vector<double> x, std::vector<double> y,
                                 std::string x_label, std::string y_label)
    : x_(std::move(x)), y_(std::move(y)), x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {
  if (x_.size() != y_.size()) {
    throw std::invalid_argument(
        fmt::format("x and y lengths differ ({} vs {})", x_.size(), y_.size()));
  }
  if (x_.size() < 2) {
    throw DataError(fmt::format("need at least 2 observations, got {}", x_.size()));
  }
  for (std::size_t k = 0; k < x_.size(); ++k) {
    if (!std::isfinite(x_[k]) || !std::isfinite(y_[k])) {
      throw DataError(fmt::format("non-finite value in pair {}", k));
    }
  }
}

BivariateSample BivariateSample::select(const std::vector<std::size_t>& rows) const {
  std::vector<double> x, y;
  x.reserve(rows.size());
  y.reserve(rows.size());
  for (const auto r : rows) {
    if (r >= size()) throw std::out_of_range("row index out of range");
    x.push_back(x_[r]);
    y.push_back(y_[r]);
  }
  return BivariateSample(std::move(x), std::move(y), x_label_, y_label_);
}

BivariateSample BivariateSample::swapped() const {
  return BivariateSample(y_, x_, y_label_, x_label_);
}

namespace {

std::vector<std::string> split_record(std::string_view line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::size_t resolve_column(const ColumnRef& ref, const std::vector<std::string>& header,
                           bool has_header) {
  if (const auto* index = std::get_if<std::size_t>(&ref)) return *index;
  const auto& name = std::get<std::string>(ref);
  if (!has_header) {
    throw DataError(fmt::format("column '{}' requested by name but file has no header", name));
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;  // first match wins
  }
  throw DataError(fmt::format("column '{}' not found", name));
}

std::string column_label(const ColumnRef& ref, const std::vector<std::string>& header,
                         std::size_t index) {
  if (index < header.size()) return std::string(trim(header[index]));
  if (const auto* name = std::get_if<std::string>(&ref)) return *name;
  return fmt::format("column{}", index);
}

}  // namespace

BivariateSample parse_csv(std::string_view text, const IngestOptions& opts) {
  if (opts.max_n && *opts.max_n < 2) throw std::invalid_argument("max_n must be >= 2");

  std::vector<std::string> header;
  std::vector<double> x, y;
  std::size_t xi = 0, yi = 0;
  bool columns_resolved = false;
  std::size_t line_no = 0;

  // Strip a UTF-8 byte order mark.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    auto fields = split_record(line, opts.delimiter);
    if (opts.has_header && header.empty() && !columns_resolved) {
      header = std::move(fields);
      xi = resolve_column(opts.x_column, header, true);
      yi = resolve_column(opts.y_column, header, true);
      columns_resolved = true;
      continue;
    }
    if (!columns_resolved) {
      xi = resolve_column(opts.x_column, header, false);
      yi = resolve_column(opts.y_column, header, false);
      columns_resolved = true;
      if (std::max(xi, yi) >= fields.size()) {
        throw DataError(fmt::format("column index {} not found", std::max(xi, yi)));
      }
    }
    const auto width = std::max(xi, yi) + 1;
    std::optional<double> xv, yv;
    if (fields.size() >= width) {
      xv = parse_number(fields[xi]);
      yv = parse_number(fields[yi]);
    }
    if (!xv || !yv) {
      if (opts.na_policy == NaPolicy::Error) {
        throw DataError(fmt::format("line {}: missing or non-numeric value", line_no));
      }
      continue;
    }
    x.push_back(*xv);
    y.push_back(*yv);
  }
  if (!columns_resolved) throw DataError("input is empty");
  if (header.empty() && opts.has_header) throw DataError("missing header line");

  const auto max_col = std::max(xi, yi);
  if (opts.has_header && max_col >= header.size()) {
    throw DataError(fmt::format("column index {} not found", max_col));
  }
  if (x.size() < 2) {
    throw DataError(fmt::format("fewer than 2 valid rows ({})", x.size()));
  }

  BivariateSample sample(std::move(x), std::move(y), column_label(opts.x_column, header, xi),
                         column_label(opts.y_column, header, yi));
  if (opts.max_n && sample.size() > *opts.max_n) {
    return subsample(sample, *opts.max_n, opts.seed);
  }
  return sample;
}

BivariateSample load_csv(const std::filesystem::path& path, const IngestOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), opts);
}

std::vector<std::size_t> subsample_rows(std::size_t total, std::size_t n, std::uint64_t seed) {
  if (n < 2 || n > total) {
    throw std::invalid_argument(
        fmt::format("subsample size {} outside [2, {}]", n, total));
  }
  std::vector<std::size_t> index(total);
  std::iota(index.begin(), index.end(), std::size_t{0});
  if (n == total) return index;
  Rng rng(seed);
  // Fisher-Yates prefix: positions [0, n) end up a uniform n-subset.
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(total - i));
    std::swap(index[i], index[j]);
  }
  index.resize(n);
  std::sort(index.begin(), index.end());
  return index;
}

BivariateSample subsample(const BivariateSample& s, std::size_t n, std::uint64_t seed) {
  return s.select(subsample_rows(s.size(), n, seed));
}

void write_csv(const std::filesystem::path& path, const BivariateSample& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  out << s.x_label() << ',' << s.y_label() << '\n';
  for (std::size_t k = 0; k < s.size(); ++k) {
    out << fmt::format("{:.17g},{:.17g}\n", s.x()[k], s.y()[k]);
  }
  if (!out) throw DataError(fmt::format("write failed for '{}'", path.string()));
}

}  // namespace dplot
