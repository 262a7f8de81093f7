#pragma once

#include <stdexcept>
#include <string>

namespace goalnet {

// Base for every error the library throws on purpose. Subclasses map onto
// the CLI exit codes (see pipeline.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input file: bad JSON, bad CSV cell, unexpected layout.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input parsed, but a column or field required by the schema is missing or a
// schema version does not match.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class FetchError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf produced by an op, a diverged training run, a fixed point that does
// not converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

class MissingArtifactError : public Error {
 public:
  using Error::Error;
};

}  // namespace goalnet
