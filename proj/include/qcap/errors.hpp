#pragma once

#include <stdexcept>
#include <string>

namespace qcap {

// Error taxonomy shared across modules. Every condition a caller can act on
// gets its own type; messages carry the offending index or quantity.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct Imbalance : Error {
  using Error::Error;
};
struct InvalidAjn : Error {
  using Error::Error;
};
struct SingularAggregate : Error {
  using Error::Error;
};
struct SingularUpdate : Error {
  using Error::Error;
};
struct ZeroRepresentation : Error {
  using Error::Error;
};
struct SingularBlock : Error {
  using Error::Error;
};
struct NotExtremal : Error {
  using Error::Error;
};
struct SplitImbalance : Error {
  using Error::Error;
};
struct NotTriangular : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace qcap
