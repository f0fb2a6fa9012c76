#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holmes {

enum class ErrorCode {
  MalformedLine,
  InvalidValue,
  NoHeaders,
  MissingRequired,
  IoError,
  EmptyCorpus,
  EmptyVocabulary,
  InvalidParams,
  ZeroVector,
  LengthMismatch,
  TooFewPoints,
  DegenerateData,
  DimensionMismatch,
  UnsupportedFormat,
  TooFewTrainingEvents,
  EmptyDetectWindow,
  OutOfOrderEvent,
  InvalidSpec,
  ConnectionFailed,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above; the
// message is a single human-readable line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace holmes
