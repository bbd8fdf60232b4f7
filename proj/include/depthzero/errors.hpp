#pragma once

#include <stdexcept>
#include <string>

namespace depthzero {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised when an enumeration or closure would exceed its configured budget.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Not enough retained terms to decide a valuation or an equality.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedCase : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A structural identity that must hold for valid input failed. `check()`
/// names the identity so reports can point at it.
class InvariantViolation : public Error {
 public:
  InvariantViolation(std::string check, const std::string& detail)
      : Error(check + ": " + detail), check_(std::move(check)) {}

  const std::string& check() const noexcept { return check_; }

 private:
  std::string check_;
};

}  // namespace depthzero
