#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "dplot/error.hpp"
#include "dplot/ingest.hpp"
#include "dplot/rng.hpp"

using namespace dplot;

namespace {

BivariateSample ramp(std::size_t n) {
  std::vector<double> x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = static_cast<double>(k);
    y[k] = static_cast<double>(k) * 10.0 + 0.5;
  }
  return BivariateSample(x, y);
}

}  // namespace

TEST_CASE("two-row file with header") {
  const auto s = parse_csv("x,y\n1,2\n3,4", {});
  CHECK(s.size() == 2);
  CHECK(s.x() == std::vector<double>{1, 3});
  CHECK(s.y() == std::vector<double>{2, 4});
  CHECK(s.x_label() == "x");
  CHECK(s.y_label() == "y");
}

TEST_CASE("non-numeric rows are dropped or rejected per policy") {
  const std::string text = "x,y\n1,2\na,5\n3,4\n5,\n7,8\n";
  const auto s = parse_csv(text, {});
  CHECK(s.x() == std::vector<double>{1, 3, 7});
  IngestOptions strict;
  strict.na_policy = NaPolicy::Error;
  CHECK_THROWS_AS(parse_csv(text, strict), DataError);
}

TEST_CASE("columns by name, by index, duplicates resolve to the first") {
  const std::string text = "id,b,a,b\n1,10,20,30\n2,11,21,31\n";
  IngestOptions o;
  o.x_column = std::string("a");
  o.y_column = std::string("b");
  auto s = parse_csv(text, o);
  CHECK(s.x() == std::vector<double>{20, 21});
  CHECK(s.y() == std::vector<double>{10, 11});
  o.x_column = std::size_t{3};
  s = parse_csv(text, o);
  CHECK(s.x() == std::vector<double>{30, 31});
  o.y_column = std::string("missing");
  CHECK_THROWS_AS(parse_csv(text, o), DataError);
  o.y_column = std::size_t{9};
  CHECK_THROWS_AS(parse_csv(text, o), DataError);
}

TEST_CASE("quoting, CRLF, BOM, custom delimiter, headerless") {
  const auto s = parse_csv("\xEF\xBB\xBF\"x, quoted\",y\r\n\"1.5\",2e3\r\n-4,+5\r\n", {});
  CHECK(s.x_label() == "x, quoted");
  CHECK(s.x() == std::vector<double>{1.5, -4});
  CHECK(s.y() == std::vector<double>{2000, 5});

  IngestOptions tsv;
  tsv.delimiter = '\t';
  tsv.has_header = false;
  const auto t = parse_csv("1\t2\n3\t4\n", tsv);
  CHECK(t.size() == 2);
  CHECK(t.y() == std::vector<double>{2, 4});
}

TEST_CASE("too few rows, empty input, missing file") {
  CHECK_THROWS_AS(parse_csv("x,y\n1,2\n", {}), DataError);
  CHECK_THROWS_AS(parse_csv("", {}), DataError);
  CHECK_THROWS_AS(parse_csv("x,y\nnan,1\ninf,2\n3,4\n", {}), DataError);
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", {}), DataError);
}

TEST_CASE("sample validation") {
  CHECK_THROWS_AS(BivariateSample({1, 2}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(BivariateSample({1}, {1}), DataError);
  CHECK_THROWS_AS(BivariateSample({1, std::nan("")}, {1, 2}), DataError);
}

TEST_CASE("subsample: identity, determinism, seeds differ, pairing kept") {
  const auto s = ramp(10000);
  CHECK(subsample(s, s.size(), 7) == s);
  const auto a = subsample(s, 1000, 42);
  const auto b = subsample(s, 1000, 42);
  const auto c = subsample(s, 1000, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.size() == 1000);
  std::set<double> seen;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a.y()[k] == a.x()[k] * 10.0 + 0.5);
    seen.insert(a.x()[k]);
    if (k) CHECK(a.x()[k - 1] < a.x()[k]);  // input order preserved
  }
  CHECK(seen.size() == 1000);
  CHECK_THROWS_AS(subsample(s, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(subsample(s, 10001, 0), std::invalid_argument);
}

TEST_CASE("subsample is roughly uniform over rows") {
  // Each of 20 rows should be picked about half the time when drawing 10.
  std::vector<int> hits(20, 0);
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    for (const auto r : subsample_rows(20, 10, seed)) ++hits[r];
  }
  for (const int h : hits) CHECK(std::abs(h - 1000) < 120);
}

TEST_CASE("max_n in ingest options subsamples") {
  std::string text = "x,y\n";
  for (int k = 0; k < 50; ++k) text += std::to_string(k) + "," + std::to_string(2 * k) + "\n";
  IngestOptions o;
  o.max_n = 10;
  o.seed = 3;
  const auto s = parse_csv(text, o);
  CHECK(s.size() == 10);
  CHECK(s == subsample(parse_csv(text, {}), 10, 3));
  o.max_n = 1;
  CHECK_THROWS_AS(parse_csv(text, o), std::invalid_argument);
}

TEST_CASE("csv round trip is exact") {
  Rng rng(5);
  std::vector<double> x(100), y(100);
  for (auto& v : x) v = rng.uniform() * 1e6 - 3;
  for (auto& v : y) v = std::ldexp(rng.uniform(), -40);
  const BivariateSample s(x, y, "a", "b");
  const auto path = std::filesystem::temp_directory_path() / "dplot_roundtrip.csv";
  write_csv(path, s);
  IngestOptions o;
  o.x_column = std::string("a");
  o.y_column = std::string("b");
  CHECK(load_csv(path, o) == s);
  std::filesystem::remove(path);
}
