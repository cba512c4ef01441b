#pragma once

#include <stdexcept>
#include <string>

namespace darepair {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input that could not be parsed (carries file/line context in the message).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally valid input that violates the expected schema or an invariant.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Invalid study or command configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace darepair
