#pragma once

#include <stdexcept>
#include <string>

namespace cozeta {

// Base of every library error. The CLI maps InputError subclasses to exit
// code 2 and BudgetExceeded to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class DivisionByZero : public DomainError {
 public:
  using DomainError::DomainError;
};

class DenominatorVanishes : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonExpandable : public DomainError {
 public:
  using DomainError::DomainError;
};

class VariableMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

class JacobiViolation : public InputError {
 public:
  JacobiViolation(int i, int j, int k, const std::string& what);
  int i, j, k;
};

class SingularMatrix : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnknownFamily : public InputError {
 public:
  using InputError::InputError;
};

class FixedPrimeFormula : public DomainError {
 public:
  using DomainError::DomainError;
};

class ShapeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConvergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace cozeta
