#include "softedge/error.hpp"

namespace softedge {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::TruncatedPayload: return "TruncatedPayload";
    case ErrorKind::MalformedPayload: return "MalformedPayload";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::EmptyTensor: return "EmptyTensor";
    case ErrorKind::PercentileOutOfRange: return "PercentileOutOfRange";
    case ErrorKind::DegenerateRange: return "DegenerateRange";
    case ErrorKind::NonCanonicalCode: return "NonCanonicalCode";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ZeroSignal: return "ZeroSignal";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> index)
    : std::runtime_error(message), kind_(kind), index_(index) {}

}  // namespace softedge
