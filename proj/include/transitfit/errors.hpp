#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace transitfit {

/// Base for all library errors. `kind()` is a stable machine-readable tag,
/// `what()` the human diagnostic.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct IoError : Error {
  explicit IoError(const std::string& m) : Error("io", m) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& m) : Error("schema", m) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& m) : Error("shape", m) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error("config", m) {}
};

struct DegenerateDataError : Error {
  explicit DegenerateDataError(const std::string& m) : Error("degenerate_data", m) {}
};

struct InsufficientDataError : Error {
  explicit InsufficientDataError(const std::string& m) : Error("insufficient_data", m) {}
};

/// Raised when the design matrix is numerically rank deficient. Carries the
/// name of the first column found to be linearly dependent on the others.
class CollinearityError : public Error {
 public:
  explicit CollinearityError(std::string column, const std::string& m)
      : Error("collinearity", m), column_(std::move(column)) {}

  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

struct InvalidInferenceError : Error {
  explicit InvalidInferenceError(const std::string& m) : Error("invalid_inference", m) {}
};

struct DegenerateVarianceError : Error {
  explicit DegenerateVarianceError(const std::string& m) : Error("degenerate_variance", m) {}
};

}  // namespace transitfit
