#pragma once

#include <stdexcept>
#include <string>

namespace spinlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input exceeds an enumeration or vertex-count cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Objective or fit is ill-posed for the given data (e.g. constant spins).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Malformed or semantically invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinlab
