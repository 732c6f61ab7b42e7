#pragma once

#include <stdexcept>
#include <string>

namespace fiolab {

// Every failure raised by the library derives from Error; the CLI maps the
// concrete type to an exit code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad input values: non-finite samples, off-grid shifts, band-limit leakage.
class ValidationError : public Error {
public:
  using Error::Error;
};

// Shapes or grids that do not line up.
class StructuralError : public Error {
public:
  using Error::Error;
};

// Parameters outside the range where an operation is defined.
class DomainError : public Error {
public:
  using Error::Error;
};

// Memory budget exceeded or an output location that cannot be written.
class ResourceError : public Error {
public:
  using Error::Error;
};

} // namespace fiolab
