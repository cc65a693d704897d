#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odokit {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid geometry, encoder setup, simulation parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A function argument outside its documented domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed encoder sample stream; carries the index of the bad sample.
class StreamError : public Error {
 public:
  StreamError(std::size_t index, const std::string& what)
      : Error("sample " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Calibration data that cannot produce a valid correction.
class FitError : public Error {
 public:
  using Error::Error;
};

// A motion plan the vehicle cannot execute.
class PlanError : public Error {
 public:
  using Error::Error;
};

// File content that does not match its expected format.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace odokit
