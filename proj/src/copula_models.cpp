#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "dplot/models.hpp"

namespace dplot {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// From this |theta| on the Frank cdf is evaluated in factored form. The
// direct form loses digits to cancellation as theta grows (about 1e-13 at
// theta = 10, 1e-8 near 25); the factored form loses them as theta -> 0.
constexpr double kFrankFactoredThreshold = 1.0;
constexpr double kTiny = 0x1.0p-53;

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

double frank_cdf_direct(double theta, double u, double v) {
  const double a = std::expm1(-theta * u);
  const double b = std::expm1(-theta * v);
  const double c = std::expm1(-theta);
  return -std::log1p(a * b / c) / theta;
}

// theta > 0. With m = min(u, v), M = max(u, v):
//   C = m - log[(1 - e^{-tM}) + (e^{-t(M-m)} - e^{-t(1-m)})] / t + log(1 - e^{-t}) / t
// Every exponential is <= 1, so nothing overflows and underflow is harmless.
double frank_cdf_factored(double theta, double u, double v) {
  const double m = std::min(u, v);
  const double hi = std::max(u, v);
  if (m <= 0.0) return 0.0;
  const double bracket =
      -std::expm1(-theta * hi) + (std::exp(-theta * (hi - m)) - std::exp(-theta * (1.0 - m)));
  return m - std::log(bracket) / theta + std::log(-std::expm1(-theta)) / theta;
}

double frank_cdf(double theta, double u, double v) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (std::abs(theta) < kFrankFactoredThreshold) return clamp_unit(frank_cdf_direct(theta, u, v));
  if (theta > 0.0) return clamp_unit(frank_cdf_factored(theta, u, v));
  // C_{-t}(u, v) = u - C_t(u, 1 - v)
  return clamp_unit(u - frank_cdf_factored(-theta, u, 1.0 - v));
}

void check_theta(double theta, bool open) {
  const bool ok = open ? (theta > 0.0 && theta < 1.0) : (theta >= 0.0 && theta <= 1.0);
  if (!ok) throw std::invalid_argument(fmt::format("mixing parameter {} out of range", theta));
}

void draw(const CopulaModel& c, Rng& rng, double& u, double& v, std::uint32_t& origin,
          unsigned depth) {
  std::visit(
      overloaded{
          [&](const copula::Product&) {
            u = rng.uniform_open();
            v = rng.uniform_open();
          },
          [&](const copula::UpperBound&) {
            u = rng.uniform_open();
            v = u;
          },
          [&](const copula::LowerBound&) {
            u = rng.uniform_open();
            v = 1.0 - u;
          },
          [&](const copula::Frank& f) {
            u = rng.uniform_open();
            const double t = rng.uniform_open();
            v = frank_conditional_inverse(f.theta, u, t);
          },
          [&](const copula::ConvexCombo& cc) {
            const bool second = rng.bernoulli(cc.theta);
            if (second && depth < 32) origin |= (1u << depth);
            draw(second ? *cc.second : *cc.first, rng, u, v, origin, depth + 1);
          },
          [&](const copula::Glued& g) {
            const bool second = !rng.bernoulli(g.theta);
            if (second && depth < 32) origin |= (1u << depth);
            double inner_u = 0.0;
            draw(second ? *g.second : *g.first, rng, inner_u, v, origin, depth + 1);
            u = second ? g.theta + (1.0 - g.theta) * inner_u : g.theta * inner_u;
          },
      },
      c.variant());
}

}  // namespace

CopulaPtr CopulaModel::product() { return std::make_shared<CopulaModel>(copula::Product{}); }
CopulaPtr CopulaModel::upper_bound() {
  return std::make_shared<CopulaModel>(copula::UpperBound{});
}
CopulaPtr CopulaModel::lower_bound() {
  return std::make_shared<CopulaModel>(copula::LowerBound{});
}

CopulaPtr CopulaModel::frank(double theta) {
  if (!(theta != 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("Frank parameter must be finite and non-zero");
  }
  return std::make_shared<CopulaModel>(copula::Frank{theta});
}

CopulaPtr CopulaModel::convex(CopulaPtr first, CopulaPtr second, double theta) {
  check_theta(theta, false);
  if (!first || !second) throw std::invalid_argument("missing component copula");
  return std::make_shared<CopulaModel>(
      copula::ConvexCombo{std::move(first), std::move(second), theta});
}

CopulaPtr CopulaModel::glued(CopulaPtr first, CopulaPtr second, double theta) {
  check_theta(theta, true);
  if (!first || !second) throw std::invalid_argument("missing component copula");
  return std::make_shared<CopulaModel>(copula::Glued{std::move(first), std::move(second), theta});
}

std::string CopulaModel::describe() const {
  return std::visit(
      overloaded{
          [](const copula::Product&) -> std::string { return "product"; },
          [](const copula::UpperBound&) -> std::string { return "m"; },
          [](const copula::LowerBound&) -> std::string { return "w"; },
          [](const copula::Frank& f) { return fmt::format("frank:{}", f.theta); },
          [](const copula::ConvexCombo& c) {
            return fmt::format("convex:{}:{}:{}", c.theta, c.first->describe(),
                               c.second->describe());
          },
          [](const copula::Glued& g) {
            return fmt::format("glue:{}:{}:{}", g.theta, g.first->describe(),
                               g.second->describe());
          },
      },
      variant_);
}

double copula_cdf(const CopulaModel& c, double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(fmt::format("({}, {}) outside the unit square", u, v));
  }
  return std::visit(
      overloaded{
          [&](const copula::Product&) { return u * v; },
          [&](const copula::UpperBound&) { return std::min(u, v); },
          [&](const copula::LowerBound&) { return std::max(u + v - 1.0, 0.0); },
          [&](const copula::Frank& f) { return frank_cdf(f.theta, u, v); },
          [&](const copula::ConvexCombo& cc) {
            return (1.0 - cc.theta) * copula_cdf(*cc.first, u, v) +
                   cc.theta * copula_cdf(*cc.second, u, v);
          },
          [&](const copula::Glued& g) {
            if (u <= g.theta) return g.theta * copula_cdf(*g.first, clamp_unit(u / g.theta), v);
            const double s = clamp_unit((u - g.theta) / (1.0 - g.theta));
            return (1.0 - g.theta) * copula_cdf(*g.second, s, v) + g.theta * v;
          },
      },
      c.variant());
}

double frank_conditional_inverse(double theta, double u, double t) {
  // dC_{-s}/du(u, v) = 1 - dC_s/du(u, 1 - v)
  if (theta < 0.0) return 1.0 - frank_conditional_inverse(-theta, u, 1.0 - t);
  // Solves dC/du(u, v) = t for v; every exponential below is <= 1.
  const double v =
      -std::log1p(t * std::expm1(-theta) / (t + (1.0 - t) * std::exp(-theta * u))) / theta;
  return std::clamp(v, kTiny, 1.0 - kTiny);
}

CopulaDraws sample_copula(const CopulaModel& c, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  CopulaDraws out;
  out.u.resize(n);
  out.v.resize(n);
  out.origin.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) draw(c, rng, out.u[k], out.v[k], out.origin[k], 0);
  return out;
}

}  // namespace dplot
