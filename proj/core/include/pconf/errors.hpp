#pragma once

#include <stdexcept>
#include <string>

namespace pconf {

// Malformed input files: bad CSV headers, missing columns, unreadable values.
struct InputFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem-level failures (open/read/write).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures: singular systems, non-PSD matrices.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Optimizer produced a non-finite objective or gradient.
struct DivergenceError : NumericalError {
  DivergenceError(int epoch_, const std::string& what)
      : NumericalError(what), epoch(epoch_) {}
  int epoch;
};

}  // namespace pconf
