#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eegintent {

enum class ErrorCode {
  MissingFile,
  MalformedManifest,
  DimensionMismatch,
  NonFiniteSample,
  IoFailure,
  CellTooSmall,
  UnknownChannel,
  InvalidConfig,
  NonPowerOfTwoLength,
  SignalTooShort,
  EmptyBand,
  DegenerateSample,
  InsufficientTrials,
  ShapeMismatch,
  EmptyGroup,
  DegenerateEmbeddings,
  NonFiniteLoss,
  EmptyTestSet,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedManifest: return "MalformedManifest";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteSample: return "NonFiniteSample";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::CellTooSmall: return "CellTooSmall";
    case ErrorCode::UnknownChannel: return "UnknownChannel";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NonPowerOfTwoLength: return "NonPowerOfTwoLength";
    case ErrorCode::SignalTooShort: return "SignalTooShort";
    case ErrorCode::EmptyBand: return "EmptyBand";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::InsufficientTrials: return "InsufficientTrials";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::DegenerateEmbeddings: return "DegenerateEmbeddings";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::EmptyTestSet: return "EmptyTestSet";
  }
  return "Unknown";
}

/// Every failure raised by the library. `what()` starts with the code name so
/// diagnostics are greppable; `trial_id()` is set when a specific trial is at fault.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail, std::optional<std::uint64_t> trial_id = std::nullopt)
      : std::runtime_error(format(code, detail, trial_id)), code_(code), trial_id_(trial_id) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::uint64_t> trial_id() const noexcept { return trial_id_; }

 private:
  static std::string format(ErrorCode code, const std::string& detail, std::optional<std::uint64_t> trial_id) {
    std::string out(to_string(code));
    if (trial_id) out += "(trial_id=" + std::to_string(*trial_id) + ")";
    if (!detail.empty()) out += ": " + detail;
    return out;
  }

  ErrorCode code_;
  std::optional<std::uint64_t> trial_id_;
};

}  // namespace eegintent
