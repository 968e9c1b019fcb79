#pragma once

#include <stdexcept>
#include <string>

namespace cssel {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates an operation's precondition (non-standardized matrix,
/// zero column, asymmetric input, enumeration cap exceeded, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to meet its contract (eigen residual too
/// large, non-finite objective, inconsistent factorization weights).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace cssel
