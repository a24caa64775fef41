#pragma once

#include <stdexcept>
#include <string>

namespace recoil {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Incompatible unit tags in an arithmetic operation.
struct UnitError : Error {
  using Error::Error;
};

/// A domain object violates one of its invariants or preconditions.
struct ValidationError : Error {
  using Error::Error;
};

/// Malformed or incomplete data file.
struct DataError : Error {
  using Error::Error;
};

/// Fringe analysis could not produce a usable estimate.
struct FitError : Error {
  using Error::Error;
};

}  // namespace recoil
