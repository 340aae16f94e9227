#include "trimark/error.hpp"

namespace trimark {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotARotation: return "NotARotation";
    case ErrorCode::MalformedTheta: return "MalformedTheta";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::GridTooFine: return "GridTooFine";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::BehindCamera: return "BehindCamera";
    case ErrorCode::EmptyHistory: return "EmptyHistory";
    case ErrorCode::NonmonotonicTimestamps: return "NonmonotonicTimestamps";
    case ErrorCode::MarkerOutOfFrame: return "MarkerOutOfFrame";
    case ErrorCode::MarkerTooSmall: return "MarkerTooSmall";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::MalformedData: return "MalformedData";
    case ErrorCode::TrailingData: return "TrailingData";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MixedGridSize: return "MixedGridSize";
    case ErrorCode::BorderViolation: return "BorderViolation";
    case ErrorCode::RotationCollision: return "RotationCollision";
    case ErrorCode::UnknownTemplate: return "UnknownTemplate";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace trimark
