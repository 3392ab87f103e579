#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rlnc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable tag used in CLI error JSON.
  virtual const char* kind() const noexcept { return "error"; }
};

class ArithmeticError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "arithmetic"; }
};

class UnsupportedField : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unsupported_field"; }
};

/// Malformed network document. `location` is a JSON pointer into the input.
class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& what)
      : Error(location.empty() ? what : location + ": " + what),
        location_(std::move(location)) {}
  const std::string& location() const noexcept { return location_; }
  const char* kind() const noexcept override { return "parse"; }

 private:
  std::string location_;
};

/// Structural problem with a network (cycle, unknown sink, bad path, ...).
class NetworkError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "network"; }
};

/// Requested rate exceeds the min-cut capacity of a sink.
class CapacityError : public Error {
 public:
  CapacityError(std::string sink, int capacity, int rate)
      : Error("rate " + std::to_string(rate) + " exceeds min-cut capacity C_" + sink + " = " +
              std::to_string(capacity)),
        sink_(std::move(sink)),
        capacity_(capacity),
        rate_(rate) {}
  const std::string& sink() const noexcept { return sink_; }
  int capacity() const noexcept { return capacity_; }
  int rate() const noexcept { return rate_; }
  const char* kind() const noexcept override { return "capacity"; }

 private:
  std::string sink_;
  int capacity_;
  int rate_;
};

/// Exhaustive enumeration would exceed the configured assignment cap.
class EnumerationCapError : public Error {
 public:
  EnumerationCapError(std::uint64_t q, std::uint64_t coefficients, std::string required,
                      std::uint64_t cap)
      : Error(std::to_string(q) + "^" + std::to_string(coefficients) + " = " + required +
              " assignments exceeds cap " + std::to_string(cap)),
        required_(std::move(required)) {}
  const std::string& required() const noexcept { return required_; }
  const char* kind() const noexcept override { return "enumeration_cap"; }

 private:
  std::string required_;
};

class GeneratorError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "generator"; }
};

}  // namespace rlnc
