#pragma once

#include <stdexcept>
#include <string>

namespace mmpca {

// Malformed user input: missing files, bad manifests, inconsistent dimensions.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Optimization cannot proceed (non-finite objective, every CV candidate failed).
struct optimization_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An internal invariant was violated; indicates a bug in this library.
struct invariant_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace mmpca
