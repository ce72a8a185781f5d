#pragma once

#include <stdexcept>
#include <string>

namespace igid {

// Bad argument values (non-finite inputs, empty vectors, length mismatch).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PackingInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RunawayPath : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace igid
