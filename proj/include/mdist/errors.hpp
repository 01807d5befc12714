#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdist {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Requested size exceeds a configured ceiling.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  /// 1-based line number, 0 when not tied to a file.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A moment sequence that cannot belong to a distribution on [0,1].
class InvalidMoments : public Error {
 public:
  InvalidMoments(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// The variance is numerically zero: the distribution is a point mass.
class DegenerateDistribution : public DomainError {
 public:
  DegenerateDistribution(const std::string& what, double nu) : DomainError(what), nu_(nu) {}
  double nu() const { return nu_; }

 private:
  double nu_;
};

/// A mixture weight fell below the negative tolerance. Carries the worst
/// offender and a digit budget that should be tried next.
class PrecisionFailure : public Error {
 public:
  PrecisionFailure(const std::string& what, std::size_t worst_index, double worst_value,
                   unsigned digits, unsigned suggested_digits)
      : Error(what),
        worst_index_(worst_index),
        worst_value_(worst_value),
        digits_(digits),
        suggested_digits_(suggested_digits) {}

  std::size_t worst_index() const { return worst_index_; }
  double worst_value() const { return worst_value_; }
  unsigned digits() const { return digits_; }
  unsigned suggested_digits() const { return suggested_digits_; }

 private:
  std::size_t worst_index_;
  double worst_value_;
  unsigned digits_;
  unsigned suggested_digits_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t terms) : Error(what), terms_(terms) {}
  std::size_t terms() const { return terms_; }

 private:
  std::size_t terms_;
};

}  // namespace mdist
