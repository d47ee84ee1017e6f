#include <algorithm>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "dplot/copula.hpp"
#include "dplot/rng.hpp"

namespace dplot {

PermutationTestResult independence_permutation_test(const PseudoObservations& p,
                                                     const PermutationTestOptions& opts) {
  if (opts.permutations < 19) {
    throw std::invalid_argument(
        fmt::format("permutation test needs B >= 19, got {}", opts.permutations));
  }
  if (opts.max_n < 2) throw std::invalid_argument("permutation test max_n must be >= 2");
  const Rng root(opts.seed);

  PseudoObservations tested = p;
  if (p.size() > opts.max_n) {
    const auto rows = subsample_rows(p.size(), opts.max_n, root.split("subsample").seed());
    tested.u.clear();
    tested.v.clear();
    for (const auto r : rows) {
      tested.u.push_back(p.u[r]);
      tested.v.push_back(p.v[r]);
    }
  }
  const auto observed = empirical_copula(tested);
  const auto n = observed.size();
  const auto observed_sum = kernel_sums(observed, 1).absolute_sum;

  // Null draws: the y-rank multiset shuffled against the fixed x-ranks. The
  // shuffles are drawn sequentially so the result is independent of threads.
  std::vector<std::uint32_t> base(observed.y_rank().begin(), observed.y_rank().end());
  std::sort(base.begin(), base.end());
  const std::vector<std::uint32_t> x_rank(observed.x_rank().begin(), observed.x_rank().end());
  Rng rng = root.split("permutations");
  std::vector<std::vector<std::uint32_t>> draws(opts.permutations, base);
  for (auto& d : draws) shuffle(std::span<std::uint32_t>(d), rng);

  std::vector<char> exceeds(opts.permutations, 0);
  auto evaluate = [&](std::size_t begin, std::size_t end) {
    for (auto b = begin; b < end; ++b) {
      const EmpiricalCopula permuted(x_rank, draws[b]);
      exceeds[b] = kernel_sums(permuted, 1).absolute_sum >= observed_sum ? 1 : 0;
    }
  };
  unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : opts.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, opts.permutations));
  if (threads <= 1) {
    evaluate(0, opts.permutations);
  } else {
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back(evaluate, w * opts.permutations / threads,
                           (w + 1) * opts.permutations / threads);
    }
    for (auto& w : workers) w.join();
  }

  PermutationTestResult result;
  result.permutations = opts.permutations;
  result.tested_n = n;
  result.exceedances = static_cast<std::size_t>(std::count(exceeds.begin(), exceeds.end(), 1));
  result.p_value = static_cast<double>(1 + result.exceedances) /
                   static_cast<double>(opts.permutations + 1);
  return result;
}

}  // namespace dplot
