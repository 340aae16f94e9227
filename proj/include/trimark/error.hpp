#pragma once

#include <stdexcept>
#include <string>

namespace trimark {

// Numeric values are part of the C ABI (see trimark.h); append only.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Io = 2,
  Parse = 3,
  DegenerateTriangle = 4,
  SingularMatrix = 5,
  NotARotation = 6,
  MalformedTheta = 7,
  ImageTooSmall = 8,
  DegenerateConfiguration = 9,
  GridTooFine = 10,
  GridMismatch = 11,
  BehindCamera = 12,
  EmptyHistory = 13,
  NonmonotonicTimestamps = 14,
  MarkerOutOfFrame = 15,
  MarkerTooSmall = 16,
  MalformedHeader = 17,
  TruncatedData = 18,
  UnsupportedMaxval = 19,
  MalformedData = 20,
  TrailingData = 21,
  BadMagic = 22,
  DuplicateId = 23,
  MixedGridSize = 24,
  BorderViolation = 25,
  RotationCollision = 26,
  UnknownTemplate = 27,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace trimark
