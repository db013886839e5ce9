#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bachlab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An elementary function or metric was evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Jet dimension/order mismatch, or a derivative requested beyond the
/// available truncation order.
class OrderError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Malformed manifold, soliton or identity-case specification.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// A numerical hypothesis of an identity (conformality, Bianchi-type
/// condition, constancy of an invariant) failed.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Integrator or root-finder breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace bachlab
