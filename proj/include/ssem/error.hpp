#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// No grid node falls strictly inside the domain.
class EmptyDomain : public Error {
 public:
  using Error::Error;
};

/// The domain description lacks what an operation needs (e.g. a star-shaped
/// surface for 3D boundary sampling).
class UnsupportedDomain : public Error {
 public:
  using Error::Error;
};

/// More constraints than grid unknowns.
class UnderResolved : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  RankDeficient(std::size_t constraint, const std::string& what)
      : Error(what), constraint_(constraint) {}

  /// Index (in constraint order) of the first column whose pivot fell below
  /// the rank tolerance.
  std::size_t constraint() const noexcept { return constraint_; }

 private:
  std::size_t constraint_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ssem
