#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string_view>

#include <fmt/format.h>

#include "dplot/models.hpp"

namespace dplot {
namespace {

std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delim, start);
    parts.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_double(const std::string& token, const std::string& context) {
  double value = 0.0;
  std::string_view view(token);
  if (!view.empty() && view.front() == '+') view.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), value);
  if (ec != std::errc{} || ptr != view.data() + view.size() || !std::isfinite(value)) {
    throw std::invalid_argument(fmt::format("bad number '{}' in '{}'", token, context));
  }
  return value;
}

std::vector<double> numbers(const std::string& list, const std::string& context) {
  std::vector<double> out;
  for (const auto& token : split(list, ',')) out.push_back(to_double(token, context));
  return out;
}

CopulaPtr parse_copula_tokens(const std::vector<std::string>& tokens, std::size_t& pos,
                              const std::string& spec) {
  if (pos >= tokens.size()) {
    throw std::invalid_argument(fmt::format("incomplete copula spec '{}'", spec));
  }
  const auto& name = tokens[pos++];
  auto parameter = [&]() {
    if (pos >= tokens.size()) {
      throw std::invalid_argument(fmt::format("'{}' needs a parameter in '{}'", name, spec));
    }
    return to_double(tokens[pos++], spec);
  };
  if (name == "product" || name == "pi" || name == "independence") return CopulaModel::product();
  if (name == "m" || name == "upper") return CopulaModel::upper_bound();
  if (name == "w" || name == "lower") return CopulaModel::lower_bound();
  if (name == "frank") return CopulaModel::frank(parameter());
  if (name == "convex" || name == "glue") {
    const double theta = parameter();
    auto first = parse_copula_tokens(tokens, pos, spec);
    auto second = parse_copula_tokens(tokens, pos, spec);
    return name == "convex" ? CopulaModel::convex(first, second, theta)
                            : CopulaModel::glued(first, second, theta);
  }
  throw std::invalid_argument(fmt::format("unknown copula '{}' in '{}'", name, spec));
}

}  // namespace

CopulaPtr parse_copula(const std::string& spec) {
  const auto tokens = split(spec, ':');
  std::size_t pos = 0;
  auto model = parse_copula_tokens(tokens, pos, spec);
  if (pos != tokens.size()) {
    throw std::invalid_argument(fmt::format("trailing tokens in copula spec '{}'", spec));
  }
  return model;
}

MarginalModel parse_marginal(const std::string& spec) {
  const auto colon = spec.find(':');
  const auto name = spec.substr(0, colon);
  const auto args = colon == std::string::npos ? std::string{} : spec.substr(colon + 1);
  auto params = [&](std::size_t count) {
    auto values = args.empty() ? std::vector<double>{} : numbers(args, spec);
    if (values.size() != count) {
      throw std::invalid_argument(
          fmt::format("'{}' expects {} parameters, got {}", name, count, values.size()));
    }
    return values;
  };
  if (name == "uniform") {
    if (args.empty()) return MarginalModel::uniform(0.0, 1.0);
    const auto p = params(2);
    return MarginalModel::uniform(p[0], p[1]);
  }
  if (name == "kumaraswamy") {
    const auto p = params(2);
    return MarginalModel::kumaraswamy(p[0], p[1]);
  }
  if (name == "studentt" || name == "t") {
    const auto p = params(3);
    return MarginalModel::student_t(p[0], p[1], p[2]);
  }
  if (name == "pareto") {
    const auto p = params(2);
    return MarginalModel::pareto(p[0], p[1]);
  }
  if (name == "normal") {
    const auto p = params(2);
    return MarginalModel::normal(p[0], p[1]);
  }
  if (name == "points") {
    const auto slash = args.find('/');
    if (slash == std::string::npos) {
      throw std::invalid_argument(fmt::format("'{}' needs points/weights", spec));
    }
    return MarginalModel::point_mixture(numbers(args.substr(0, slash), spec),
                                        numbers(args.substr(slash + 1), spec));
  }
  throw std::invalid_argument(fmt::format("unknown marginal '{}'", name));
}

}  // namespace dplot
