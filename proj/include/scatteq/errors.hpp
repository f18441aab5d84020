#pragma once

#include <stdexcept>
#include <string>

namespace scatteq {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Enumeration or table size beyond the supported cap.
class CapacityError : public Error {
public:
  using Error::Error;
};

// Structurally invalid arguments (mismatched particle counts, bad sizes).
class DomainError : public Error {
public:
  using Error::Error;
};

// Operands defined on different quadrature spaces.
class SpaceMismatchError : public Error {
public:
  using Error::Error;
};

// Bad or missing configuration input.
class ConfigError : public Error {
public:
  using Error::Error;
};

// A cluster-expansion inversion was asked for with components missing.
class IncompleteExpansionError : public Error {
public:
  using Error::Error;
};

// Requested energy outside the momentum range the grid can represent.
class ExtrapolationError : public Error {
public:
  using Error::Error;
};

// Projected linear system numerically singular.
class IllConditionedError : public Error {
public:
  IllConditionedError(const std::string& msg, double cond)
      : Error(msg), condition(cond) {}
  double condition;
};

// Conjugation refused because the would-be unitary fails its residual gate.
class NotUnitaryError : public Error {
public:
  NotUnitaryError(const std::string& msg, double res)
      : Error(msg), residual(res) {}
  double residual;
};

}  // namespace scatteq
