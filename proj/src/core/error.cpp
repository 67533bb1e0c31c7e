#include "core/error.hpp"

namespace pulse {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingDocument: return "MissingDocument";
    case ErrorCode::ManifestSchema: return "ManifestSchema";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::OfflineUnavailable: return "OfflineUnavailable";
    case ErrorCode::TranscriptMiss: return "TranscriptMiss";
    case ErrorCode::EndpointError: return "EndpointError";
    case ErrorCode::AuthMissing: return "AuthMissing";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::KExceedsN: return "KExceedsN";
    case ErrorCode::AmbiguousIntent: return "AmbiguousIntent";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::ExtractionFailed: return "ExtractionFailed";
    case ErrorCode::DuplicateDoc: return "DuplicateDoc";
    case ErrorCode::EmptyChain: return "EmptyChain";
    case ErrorCode::NoTable: return "NoTable";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::NoSamples: return "NoSamples";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace pulse
