#include <algorithm>
#include <stdexcept>

#include "dplot/copula.hpp"
#include "dplot/fenwick.hpp"

namespace dplot {

std::size_t default_diagonal_grid(std::size_t n) noexcept { return std::min<std::size_t>(n, 512); }

DiagonalCurves diagonal_sections(const EmpiricalCopula& c, std::size_t m) {
  if (m < 2) throw std::invalid_argument("diagonal grid needs m >= 2");
  const auto n = c.size();
  const auto xr = c.x_rank();
  const auto yr = c.y_rank();

  DiagonalCurves d;
  d.n = n;
  d.t.resize(m + 1);
  for (auto* curve : {&d.delta, &d.lambda, &d.delta_pi, &d.lambda_pi, &d.delta_lower,
                      &d.delta_upper, &d.lambda_upper}) {
    curve->resize(m + 1);
  }

  // Rows i_k = floor(k n / m) never decrease, so one pass with a Fenwick tree
  // over y-ranks answers every count.
  FenwickTree<std::uint32_t> inserted(n);
  std::size_t next = 0;
  const auto nd = static_cast<double>(n);
  for (std::size_t k = 0; k <= m; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(m);
    const auto i = k * n / m;
    const auto j_anti = (m - k) * n / m;
    while (next < n && xr[next] <= i) inserted.add(yr[next++], 1);
    d.t[k] = t;
    d.delta[k] = static_cast<double>(inserted.prefix(i)) / nd;
    d.lambda[k] = static_cast<double>(inserted.prefix(j_anti)) / nd;
    d.delta_pi[k] = t * t;
    d.lambda_pi[k] = t * (1.0 - t);
    d.delta_lower[k] = std::max(2.0 * t - 1.0, 0.0);
    d.delta_upper[k] = t;
    d.lambda_upper[k] = std::min(t, 1.0 - t);
  }
  return d;
}

}  // namespace dplot
