#pragma once

#include <stdexcept>
#include <string>

namespace synpart {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or input violates a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A nm location or voxel index falls outside the volume.
class BoundsError : public ValidationError {
 public:
  BoundsError(int axis, const std::string& what)
      : ValidationError(what), axis_(axis) {}
  int axis() const noexcept { return axis_; }

 private:
  int axis_;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A file was readable but its contents do not match the expected layout.
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace synpart
