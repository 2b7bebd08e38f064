#pragma once

#include <stdexcept>
#include <string>

namespace nmeq {

/// Base class for all nmeq errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

/// A matrix required to be symmetric positive definite is not (a Cholesky
/// pivot or an eigenvalue at or below the relative tolerance).
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(const std::string& msg) : Error(msg) {}
};

/// An iterative kernel exceeded its sweep or iteration cap.
class NoConvergence : public Error {
 public:
  explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

/// D'D in a total least squares problem is numerically rank deficient.
class RankDeficient : public Error {
 public:
  explicit RankDeficient(const std::string& msg) : Error(msg) {}
};

/// T'T in a total least squares problem is numerically singular, so no
/// positive definite solution exists at machine scale.
class SingularTarget : public Error {
 public:
  explicit SingularTarget(const std::string& msg) : Error(msg) {}
};

class InvalidAlpha : public Error {
 public:
  explicit InvalidAlpha(const std::string& msg) : Error(msg) {}
};

class UnknownSolverId : public Error {
 public:
  explicit UnknownSolverId(const std::string& msg) : Error(msg) {}
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace nmeq
