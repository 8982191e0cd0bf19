#pragma once

#include <stdexcept>
#include <string>

namespace wickprop {

// Invalid or inconsistent user input (config file, CLI arguments).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical blow-up during time stepping; t is the time of the failed step.
struct BlowUpError : std::runtime_error {
  double t;
  BlowUpError(double t_, const std::string& msg) : std::runtime_error(msg), t(t_) {}
};

// Operands disagree on index set or grid shape, or an index is missing
// from the set it is looked up in.
struct ShapeError : std::logic_error {
  using std::logic_error::logic_error;
};

// Requested truncation exceeds the hard cardinality cap.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Direct linear solve hit a near-zero pivot.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wickprop
