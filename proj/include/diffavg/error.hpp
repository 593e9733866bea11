#pragma once

#include <stdexcept>
#include <string>

namespace diffavg {

// Base for every contract violation raised by the library. The CLI maps
// these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// A grid does not cover the Gaussian widths implied by the model parameters.
class CoverageError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class UnsupportedSymbolError : public Error {
 public:
  using Error::Error;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

class InsufficientSignalError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, int suggested_points)
      : Error(what), suggested_points_(suggested_points) {}

  int suggested_points() const { return suggested_points_; }

 private:
  int suggested_points_;
};

}  // namespace diffavg
