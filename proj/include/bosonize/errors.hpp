#pragma once

#include <stdexcept>
#include <string>

namespace bosonize {

// Precondition violated by the caller (zero momentum, odd patch count, ...).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the real domain of a function (arcoth below 1, a secular
// function evaluated on a pole).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// An iterative or dense numerical routine failed to deliver its contract.
class NumericalFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NotPositiveSemidefinite : public NumericalFailure {
public:
  using NumericalFailure::NumericalFailure;
};

class IllConditioned : public NumericalFailure {
public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace bosonize
