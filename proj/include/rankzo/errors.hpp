#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rankzo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or invalid optimizer / experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A ranking or direction set is malformed (wrong length, not a permutation).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class OracleError : public Error {
 public:
  OracleError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A problem's certified constants were violated by sampling.
class CertificationError : public Error {
 public:
  CertificationError(const std::string& assumption, const std::string& detail)
      : Error(assumption + ": " + detail), assumption_(assumption) {}
  const std::string& assumption() const noexcept { return assumption_; }

 private:
  std::string assumption_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rankzo
