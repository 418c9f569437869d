#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace switchexit {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition of a public operation (bad argument combination).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Evaluation left the domain of an operation (1/0, log of non-positive, ...).
class DomainError : public Error {
 public:
  DomainError(std::string node, double x);
  const std::string& node() const noexcept { return node_; }
  double x() const noexcept { return x_; }

 private:
  std::string node_;
  double x_;
};

class NotDifferentiableError : public Error {
 public:
  using Error::Error;
};

// A model assumption failed; carries the assumption name and a witness point.
class AssumptionError : public Error {
 public:
  AssumptionError(std::string assumption, double witness, const std::string& detail);
  const std::string& assumption() const noexcept { return assumption_; }
  double witness() const noexcept { return witness_; }

 private:
  std::string assumption_;
  double witness_;
};

// Deterministic flow reached the boundary of [-R, R] before the requested time.
class DomainExitError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

class CapExceededError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& reason);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace switchexit
