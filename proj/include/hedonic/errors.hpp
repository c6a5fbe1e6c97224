#pragma once

#include <stdexcept>
#include <string>

namespace hedonic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed partition (overlap, missing agent, out-of-range index).
class StructuralError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Input outside the weight class or mechanism domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A witness builder could not produce a verified construction.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Enumeration or solver size cap exceeded. `partial` is set when some
/// work was done before the cap was hit.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what, bool partial = false)
      : Error(what), partial_(partial) {}
  bool partial() const noexcept { return partial_; }

 private:
  bool partial_;
};

}  // namespace hedonic
