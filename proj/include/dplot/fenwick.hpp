#pragma once

#include <cstddef>
#include <vector>

namespace dplot {

/// Binary indexed tree over positions 1..n holding counts.
template <typename T>
class FenwickTree {
 public:
  explicit FenwickTree(std::size_t n) : tree_(n + 1, T{}) {}

  std::size_t size() const noexcept { return tree_.size() - 1; }

  // pos is 1-based
  void add(std::size_t pos, T delta) noexcept {
    for (; pos < tree_.size(); pos += pos & (~pos + 1)) tree_[pos] += delta;
  }

  /// Sum over positions 1..pos; pos == 0 yields zero.
  T prefix(std::size_t pos) const noexcept {
    if (pos >= tree_.size()) pos = tree_.size() - 1;
    T sum{};
    for (; pos > 0; pos -= pos & (~pos + 1)) sum += tree_[pos];
    return sum;
  }

 private:
  std::vector<T> tree_;
};

}  // namespace dplot
