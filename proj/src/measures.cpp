#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "dplot/copula.hpp"
#include "dplot/error.hpp"

namespace dplot {
namespace {

// Sweeps rows [row_begin, row_end] (1-based, inclusive) of the count grid.
KernelSums sweep_rows(const EmpiricalCopula& c, std::size_t row_begin, std::size_t row_end) {
  const auto n = c.size();
  const auto xr = c.x_rank();
  const auto yr = c.y_rank();
  const auto nn = static_cast<std::int64_t>(n);

  // cnt[j - 1] = #{inserted points with y-rank <= j}
  std::vector<std::int64_t> cnt(n, 0);
  std::size_t next = 0;
  while (next < n && xr[next] < row_begin) ++cnt[yr[next++] - 1];
  for (std::size_t j = 1; j < n; ++j) cnt[j] += cnt[j - 1];

  KernelSums sums;
  for (std::size_t i = row_begin; i <= row_end; ++i) {
    while (next < n && xr[next] <= i) {
      std::int64_t* cell = cnt.data();
      for (std::size_t j = yr[next] - 1; j < n; ++j) ++cell[j];
      ++next;
    }
    const auto ii = static_cast<std::int64_t>(i);
    std::int64_t row_signed = 0;
    std::int64_t row_abs = 0;
    const std::int64_t* cell = cnt.data();
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t d = nn * cell[j] - ii * static_cast<std::int64_t>(j + 1);
      row_signed += d;
      row_abs += d < 0 ? -d : d;
    }
    sums.signed_sum += row_signed;
    sums.absolute_sum += row_abs;
  }
  return sums;
}

}  // namespace

KernelSums kernel_sums(const EmpiricalCopula& c, unsigned threads) {
  const auto n = c.size();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto blocks = std::clamp<std::size_t>(threads, 1, n);
  if (blocks == 1) return sweep_rows(c, 1, n);

  std::vector<KernelSums> partial(blocks);
  std::vector<std::thread> workers;
  workers.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto begin = 1 + b * n / blocks;
    const auto end = (b + 1) * n / blocks;
    workers.emplace_back([&c, &partial, b, begin, end] {
      partial[b] = sweep_rows(c, begin, end);
    });
  }
  for (auto& w : workers) w.join();
  KernelSums total;
  for (const auto& p : partial) {
    total.signed_sum += p.signed_sum;
    total.absolute_sum += p.absolute_sum;
  }
  return total;
}

double normalize_kernel_sum(wide_int sum, std::size_t n) {
  // 12 S / (n^2 (n^2 - 1)); the denominator is exact in 128 bits.
  const auto nn = static_cast<wide_int>(n) * static_cast<wide_int>(n);
  const wide_int denominator = nn * (nn - 1);
  const wide_int numerator = 12 * sum;
  // Split into quotient and remainder so both parts convert without loss
  // beyond the final rounding.
  const wide_int q = numerator / denominator;
  const wide_int r = numerator % denominator;
  return static_cast<double>(q) +
         static_cast<double>(static_cast<long double>(r) / static_cast<long double>(denominator));
}

namespace {

// Each point with ranks (a, b) is counted in (n + 1 - a)(n + 1 - b) grid
// cells, so sum_ij n C_n(i/n, j/n) has a closed form.
wide_int signed_sum_closed_form(const EmpiricalCopula& c) {
  const auto n = static_cast<wide_int>(c.size());
  const auto xr = c.x_rank();
  const auto yr = c.y_rank();
  wide_int counts = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    counts += (n + 1 - xr[k]) * (n + 1 - yr[k]);
  }
  const wide_int half = n * (n + 1) / 2;
  return n * counts - half * half;
}

}  // namespace

double spearman_rho(const EmpiricalCopula& c) {
  return normalize_kernel_sum(signed_sum_closed_form(c), c.size());
}

double schweizer_wolff(const EmpiricalCopula& c, unsigned threads) {
  return normalize_kernel_sum(kernel_sums(c, threads).absolute_sum, c.size());
}

MeasurePair measures(const EmpiricalCopula& c, unsigned threads) {
  const auto sums = kernel_sums(c, threads);
  if (sums.signed_sum != signed_sum_closed_form(c)) {
    throw InvariantError("grid sweep and closed-form concordance sums disagree");
  }
  if (sums.absolute_sum < sums.signed_sum || sums.absolute_sum < -sums.signed_sum) {
    throw InvariantError("absolute kernel sum below the signed sum");
  }
  return {normalize_kernel_sum(sums.signed_sum, c.size()),
          normalize_kernel_sum(sums.absolute_sum, c.size()), std::nullopt};
}

std::optional<double> pearson_r(const BivariateSample& s) {
  const auto n = static_cast<double>(s.size());
  const auto& x = s.x();
  const auto& y = s.y();
  const auto constant = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double dx = x[k] - mx;
    const double dy = y[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace dplot
