#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "dplot/ingest.hpp"
#include "dplot/rng.hpp"

namespace dplot {

// ---------------------------------------------------------------------------
// Copulas

class CopulaModel;
using CopulaPtr = std::shared_ptr<const CopulaModel>;

namespace copula {
struct Product {};
struct UpperBound {};  // M(u, v) = min(u, v)
struct LowerBound {};  // W(u, v) = max(u + v - 1, 0)
struct Frank {
  double theta;  // != 0
};
/// (1 - theta) C1 + theta C2, theta in [0, 1].
struct ConvexCombo {
  CopulaPtr first;
  CopulaPtr second;
  double theta;
};
/// first scaled onto [0, theta] x [0, 1], second onto [theta, 1] x [0, 1].
struct Glued {
  CopulaPtr first;
  CopulaPtr second;
  double theta;  // in (0, 1)
};
}  // namespace copula

/// An analytic bivariate copula. Immutable; composite variants share their
/// components.
class CopulaModel {
 public:
  using Variant = std::variant<copula::Product, copula::UpperBound, copula::LowerBound,
                               copula::Frank, copula::ConvexCombo, copula::Glued>;

  static CopulaPtr product();
  static CopulaPtr upper_bound();
  static CopulaPtr lower_bound();
  static CopulaPtr frank(double theta);
  static CopulaPtr convex(CopulaPtr first, CopulaPtr second, double theta);
  static CopulaPtr glued(CopulaPtr first, CopulaPtr second, double theta);

  const Variant& variant() const noexcept { return variant_; }
  /// Mini-language form, e.g. "glue:0.5:frank:-30:frank:30".
  std::string describe() const;

  explicit CopulaModel(Variant v) : variant_(std::move(v)) {}

 private:
  Variant variant_;
};

/// C(u, v) for (u, v) in [0, 1]^2; throws std::invalid_argument outside.
double copula_cdf(const CopulaModel& c, double u, double v);

/// Conditional inverse for the Frank family: the v with dC/du(u, v) = t.
double frank_conditional_inverse(double theta, double u, double t);

struct CopulaDraws {
  std::vector<double> u;
  std::vector<double> v;
  /// For each draw, the path of component choices (0 = first, 1 = second)
  /// taken through composite copulas, outermost first, packed into bits.
  std::vector<std::uint32_t> origin;
  std::size_t size() const noexcept { return u.size(); }
};

/// n i.i.d. pairs with joint distribution `c`.
CopulaDraws sample_copula(const CopulaModel& c, std::size_t n, Rng& rng);

// ---------------------------------------------------------------------------
// Marginals

namespace marginal {
struct Uniform {
  double a, b;
};
struct Kumaraswamy {
  double a, b;
};
struct StudentT {
  double location, scale, df;
};
/// Lomax form: support (0, inf), F(x) = 1 - (1 + x / scale)^(-shape).
struct Pareto {
  double shape, scale;
};
struct Normal {
  double mu, sigma;
};
/// Discrete distribution on finitely many points; produces ties.
struct PointMixture {
  std::vector<double> points;   // strictly increasing
  std::vector<double> weights;  // positive, normalized on construction
};
}  // namespace marginal

class MarginalModel {
 public:
  using Variant = std::variant<marginal::Uniform, marginal::Kumaraswamy, marginal::StudentT,
                               marginal::Pareto, marginal::Normal, marginal::PointMixture>;

  static MarginalModel uniform(double a = 0.0, double b = 1.0);
  static MarginalModel kumaraswamy(double a, double b);
  static MarginalModel student_t(double location, double scale, double df);
  static MarginalModel pareto(double shape, double scale);
  static MarginalModel normal(double mu, double sigma);
  static MarginalModel point_mixture(std::vector<double> points, std::vector<double> weights);

  const Variant& variant() const noexcept { return variant_; }
  bool continuous() const noexcept;
  std::string describe() const;

 private:
  explicit MarginalModel(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

/// Quantile function for p in (0, 1); throws std::invalid_argument otherwise.
double marginal_quantile(const MarginalModel& m, double p);
/// Distribution function.
double marginal_cdf(const MarginalModel& m, double x);

/// Standard normal quantile, |error| <= 1e-15 relative after refinement.
double normal_quantile(double p);

// ---------------------------------------------------------------------------
// Simulation

/// (x_k, y_k) = (Qx(u_k), Qy(v_k)) with (u_k, v_k) drawn from `c`.
BivariateSample simulate_bivariate(const CopulaModel& c, const MarginalModel& mx,
                                   const MarginalModel& my, std::size_t n, Rng& rng);

/// Y = (1 - B)(X + noise) + B Z with X, Z i.i.d. from `base`, B ~ Bernoulli(p).
struct MixtureEquation {
  MarginalModel base = MarginalModel::pareto(2.0, 10.0);
  MarginalModel noise = MarginalModel::normal(0.0, 0.03);
  double switch_probability = 0.4;
};

BivariateSample mixture_simulator(const MixtureEquation& eq, std::size_t n, Rng& rng);

// ---------------------------------------------------------------------------
// Mini-language

/// copula := product | m | w | frank:THETA
///         | convex:THETA:copula:copula | glue:THETA:copula:copula
CopulaPtr parse_copula(const std::string& spec);

/// marginal := uniform:A,B | kumaraswamy:A,B | studentt:LOC,SCALE,DF | t:LOC,SCALE,DF
///           | pareto:SHAPE,SCALE | normal:MU,SIGMA | points:X1,X2,.../W1,W2,...
MarginalModel parse_marginal(const std::string& spec);

/// The five marginal shapes of the independence gallery, in order: uniform,
/// unimodal monotone, unimodal non-monotone, bimodal, skewed bimodal.
std::vector<std::pair<std::string, MarginalModel>> gallery_marginals();

}  // namespace dplot
