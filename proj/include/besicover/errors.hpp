#pragma once

#include <stdexcept>
#include <string>

namespace besicover {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-range caller input (bad parameter, dimension mismatch).
class InputError : public Error {
 public:
  using Error::Error;
};

// Mathematically undefined request, e.g. log map of an antipodal pair.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Valid request that this implementation does not cover.
class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

// A documented precondition on the geometry of the input does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace besicover
