#ifndef TBT_ERRORS_HPP
#define TBT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tbt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  SingularMatrix(std::size_t pivot_index, double pivot_abs)
      : Error("singular matrix: pivot " + std::to_string(pivot_index) +
              " has modulus " + std::to_string(pivot_abs)),
        pivot_index_(pivot_index) {}

  std::size_t pivot_index() const { return pivot_index_; }

 private:
  std::size_t pivot_index_;
};

class NonFiniteEntry : public Error {
 public:
  using Error::Error;
};

/// Evaluation point coincides with a pole of a resolvent or of the Moebius map.
class PoleAtSpectrum : public Error {
 public:
  using Error::Error;
};

class PhiPole : public PoleAtSpectrum {
 public:
  using PoleAtSpectrum::PoleAtSpectrum;
};

class InvalidDims : public Error {
 public:
  using Error::Error;
};

class SpecIncomplete : public Error {
 public:
  using Error::Error;
};

class NotThreeD : public Error {
 public:
  using Error::Error;
};

class NotDstu : public Error {
 public:
  using Error::Error;
};

class NotSelfAdjoint : public Error {
 public:
  using Error::Error;
};

class TNotInvertible : public Error {
 public:
  using Error::Error;
};

class GSingular : public Error {
 public:
  using Error::Error;
};

class ESingular : public Error {
 public:
  using Error::Error;
};

class DegenerateSamplePair : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed spec file. `pointer()` is a JSON pointer to the offending field.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(std::move(pointer)) {}

  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace tbt

#endif  // TBT_ERRORS_HPP
