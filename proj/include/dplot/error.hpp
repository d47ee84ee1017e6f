#pragma once

#include <stdexcept>
#include <string>

namespace dplot {

// Bad input data: missing files, unparseable cells, degenerate samples.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed; indicates a bug, not bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Caller violated a documented precondition (argument out of range).
// std::invalid_argument is used directly for these.

}  // namespace dplot
