#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace softedge {

enum class ErrorKind {
  BadMagic,
  VersionMismatch,
  TruncatedPayload,
  MalformedPayload,
  NonFiniteValue,
  NonFiniteInput,
  IoFailure,
  InvalidConfig,
  EmptyTensor,
  PercentileOutOfRange,
  DegenerateRange,
  NonCanonicalCode,
  LengthMismatch,
  ZeroSignal,
  InvalidSpec,
  InvalidParams,
  Internal,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception. `index()` is set when the failure is tied to one
/// element of a tensor.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
};

}  // namespace softedge
