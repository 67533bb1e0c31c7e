#pragma once

#include <stdexcept>
#include <string>

namespace pulse {

enum class ErrorCode {
  // corpus
  MissingDocument,
  ManifestSchema,
  NotFound,
  OfflineUnavailable,
  // backend
  TranscriptMiss,
  EndpointError,
  AuthMissing,
  DimensionMismatch,
  // clusterer
  EmptyText,
  KExceedsN,
  // pipeline
  AmbiguousIntent,
  ParseFailure,
  EmptyCluster,
  // agents
  ExtractionFailed,
  DuplicateDoc,
  EmptyChain,
  NoTable,
  InvalidValue,
  // metrics
  SizeMismatch,
  TooSmall,
  NoSamples,
  EmptyInput,
  // generic
  Io,
  Config,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception. Carries a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace pulse
