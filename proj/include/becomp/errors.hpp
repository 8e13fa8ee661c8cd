#pragma once

#include <stdexcept>
#include <string>

namespace becomp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition on caller-supplied data (negative radius, bad family
// parameters, non-monotone samples, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// A decay profile whose moments diverge, or a profile that does not bound the
// curvature of the manifold it is paired with.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

// The hypothesis of a comparison statement fails for the supplied data. This is
// distinct from the comparison conclusion failing.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// The Neumann data are not compatible (the scaling identity does not hold).
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

// Step size underflow, exhausted subdivision budget, non-finite state.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

// Malformed or unknown entries in a run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace becomp
