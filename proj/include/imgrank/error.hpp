#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace imgrank {

enum class ErrorKind {
  MissingFile,
  UnsupportedFormat,
  Io,
  InvalidArgument,
  DimensionMismatch,
  EmptyInput,
  NonFinite,
};

std::string_view to_string(ErrorKind kind);

/// Every failure surfaced by the library. `module()` names the subsystem that
/// raised it so command-line reporting can qualify the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingFile: return "missing file";
    case ErrorKind::UnsupportedFormat: return "unsupported format";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::EmptyInput: return "empty input";
    case ErrorKind::NonFinite: return "non-finite value";
  }
  return "error";
}

}  // namespace imgrank
