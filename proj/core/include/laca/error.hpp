#pragma once

#include <stdexcept>
#include <string>

namespace laca {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto distinct process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed records, unparsable dates, bad arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Transport, protocol, or authentication failure talking to a model backend.
class BackendError : public Error {
 public:
  using Error::Error;
};

class AuthError : public BackendError {
 public:
  using BackendError::BackendError;
};

class StorageError : public Error {
 public:
  using Error::Error;
};

// A statistic is undefined for the given data (no usable units, zero
// variance, ...). Distinct from InputError so callers can record the entry
// as undefined instead of aborting.
class StatsError : public Error {
 public:
  using Error::Error;
};

}  // namespace laca
