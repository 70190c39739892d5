#pragma once

#include <stdexcept>
#include <string>

namespace layerlab {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class domain_error : public error {
 public:
  using error::error;
};

/// A Moebius map was evaluated at its pole (1 + w v = 0).
class pole_error : public error {
 public:
  using error::error;
};

class mixed_angular_index : public error {
 public:
  using error::error;
};

class not_an_eigenvalue : public error {
 public:
  using error::error;
};

// Impedance profile validation failures.
class validation_error : public error {
 public:
  using error::error;
};
class non_increasing_depths : public validation_error {
 public:
  using validation_error::validation_error;
};
class not_normalized : public validation_error {
 public:
  using validation_error::validation_error;
};
class impedance_not_in_right_half_plane : public validation_error {
 public:
  using validation_error::validation_error;
};

class truncation_too_small : public error {
 public:
  using error::error;
};

/// Enumeration would exceed the configured lattice point cap.
class lattice_limit_exceeded : public error {
 public:
  using error::error;
};

/// Malformed textual input (rational strings, JSON documents).
class parse_error : public error {
 public:
  using error::error;
};

/// A file could not be read or written.
class io_error : public error {
 public:
  using error::error;
};

}  // namespace layerlab
