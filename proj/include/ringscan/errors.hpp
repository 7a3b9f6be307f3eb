#pragma once

#include <stdexcept>

namespace ringscan {

/// Bad or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A referenced input file does not exist or cannot be opened (CLI exit code 3).
class MissingInputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An input file exists but its header/version/columns do not match the
/// expected format (CLI exit code 4).
class SchemaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Model training failed to converge; carries best-so-far diagnostics in the message.
class TrainingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ringscan
