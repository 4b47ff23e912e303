#pragma once

#include <stdexcept>
#include <string>

namespace icestate {

// Configuration problems: parse errors carry the offending line number,
// validation errors name the violated invariant.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure inside a time stepper or root finder (non-finite values,
// Newton non-convergence, violated stability bound).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Terminal condition: the ice column melted through (H <= 0).
struct IceVanishedError : SolverError {
  using SolverError::SolverError;
};

// Filesystem failure while emitting run outputs (unopenable path, short
// write, row width clashing with the header).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace icestate
