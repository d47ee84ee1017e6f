#include <stdexcept>

#include "dplot/models.hpp"

namespace dplot {

BivariateSample simulate_bivariate(const CopulaModel& c, const MarginalModel& mx,
                                   const MarginalModel& my, std::size_t n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("simulation needs n >= 2");
  const auto draws = sample_copula(c, n, rng);
  std::vector<double> x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = marginal_quantile(mx, draws.u[k]);
    y[k] = marginal_quantile(my, draws.v[k]);
  }
  return BivariateSample(std::move(x), std::move(y), "x", "y");
}

BivariateSample mixture_simulator(const MixtureEquation& eq, std::size_t n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("simulation needs n >= 2");
  if (!(eq.switch_probability >= 0.0 && eq.switch_probability <= 1.0)) {
    throw std::invalid_argument("switch probability outside [0, 1]");
  }
  std::vector<double> x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double xk = marginal_quantile(eq.base, rng.uniform_open());
    const double noise = marginal_quantile(eq.noise, rng.uniform_open());
    const double z = marginal_quantile(eq.base, rng.uniform_open());
    const bool b = rng.bernoulli(eq.switch_probability);
    x[k] = xk;
    y[k] = b ? z : xk + noise;
  }
  return BivariateSample(std::move(x), std::move(y), "x", "y");
}

}  // namespace dplot
