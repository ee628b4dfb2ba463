#pragma once

#include <stdexcept>
#include <string>

namespace shopscope {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or degenerate configuration (bad k, empty vocabulary, bad edges).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data that is missing, empty, or fails schema validation.
class DataError : public Error {
 public:
  using Error::Error;
  DataError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what) {}
};

class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

/// A fetch could not complete (connection failure, missing fixture, oversized body).
class TransportError : public Error {
 public:
  using Error::Error;
};

/// Retryable failure reported by a shop client (5xx, 429, dropped connection).
class TransientError : public Error {
 public:
  using Error::Error;
};

/// A shop that validated earlier no longer exists.
class ShopGoneError : public Error {
 public:
  explicit ShopGoneError(const std::string& handle)
      : Error("shop '" + handle + "' is gone"), handle_(handle) {}
  const std::string& handle() const noexcept { return handle_; }

 private:
  std::string handle_;
};

}  // namespace shopscope
