#pragma once

#include <stdexcept>
#include <string>

namespace weakfock {

/// Invalid user-supplied configuration (bad preset, shots = 0, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Post-selection probability is zero (or below 1e-12), or no shot survived
/// post-selection, so conditional averages are undefined.
class DegeneratePostSelection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The amplitude reconstruction did not reach a converged solution.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace weakfock
