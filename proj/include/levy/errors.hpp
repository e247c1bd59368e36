#pragma once

#include <stdexcept>
#include <string>

namespace levy {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A jump-measure integral failed its convergence estimate.
class QuadratureDivergence : public Error {
 public:
  using Error::Error;
};

/// The lattice cannot resolve the transition density (e^{-t Re psi} too large
/// at the Nyquist frequency), so the density-existence proxy fails.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Growth order of the input is not dominated by an admissible moment order.
class GrowthError : public Error {
 public:
  using Error::Error;
};

/// Lattice shifts leave the sampling window.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// The requested operation has no implementation for this symbol family.
class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

/// Samples violate the declared growth envelope.
class EnvelopeError : public Error {
 public:
  using Error::Error;
};

/// Configuration document failed schema validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace levy
