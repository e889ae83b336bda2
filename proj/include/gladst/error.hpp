#pragma once

#include <stdexcept>
#include <string>

namespace gladst {

/// Coarse failure category. The CLI maps each category onto a stable exit code.
enum class ErrorKind {
  config,      // invalid flags, config files or synthetic specs
  data,        // unreadable or malformed datasets, insufficient training data
  shape,       // dimension mismatches between graphs and parameters
  numeric,     // non-finite values during forward passes or training
  undefined_auc,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::config, w) {}
};

// Synthetic spec violations are configuration problems from the caller's view.
struct SpecError : Error {
  explicit SpecError(const std::string& w) : Error(ErrorKind::config, "invalid synthetic spec: " + w) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorKind::data, w) {}
};

struct IntegrityError : Error {
  explicit IntegrityError(const std::string& w) : Error(ErrorKind::data, w) {}
};

struct UnsupportedDatasetError : Error {
  explicit UnsupportedDatasetError(const std::string& w) : Error(ErrorKind::data, w) {}
};

struct InsufficientDataError : Error {
  explicit InsufficientDataError(const std::string& w) : Error(ErrorKind::data, w) {}
};

struct StratificationError : Error {
  explicit StratificationError(const std::string& w) : Error(ErrorKind::data, w) {}
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::data, w) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& w) : Error(ErrorKind::shape, w) {}
};

struct PairingError : Error {
  explicit PairingError(const std::string& w) : Error(ErrorKind::shape, w) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& w) : Error(ErrorKind::numeric, w) {}
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& phase, int epoch)
      : Error(ErrorKind::numeric,
              phase + " training diverged: non-finite loss at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

struct UndefinedAucError : Error {
  explicit UndefinedAucError(const std::string& w) : Error(ErrorKind::undefined_auc, w) {}
};

}  // namespace gladst
