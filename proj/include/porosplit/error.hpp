#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace porosplit {

enum class ErrorKind {
  InvalidGeometry,
  InvalidOrder,
  InvalidBoundarySpec,
  InvalidMaterial,
  InvalidInput,
  InvalidConfig,
  SingularSystem,
  Divergence,
  InsufficientData,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind lets
/// callers (the CLI, the sweep driver) dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// what() without the kind prefix, for re-wrapping with more context.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace porosplit
