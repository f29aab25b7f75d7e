#pragma once

#include <stdexcept>
#include <string>

namespace detfun {

// Bad caller input: wrong shapes, unknown names, mismatched primes.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Data is well-formed but some required assignment is missing.
struct IncompleteData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace detfun
