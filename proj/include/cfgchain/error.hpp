#pragma once

#include <stdexcept>
#include <string>

namespace cfgchain {

/// Every failure the library can surface, as a closed set. Callers switch on
/// the code; the message carries context (unit id, sample id, line number).
enum class ErrorCode {
  // cfg text / graph model
  MissingHeader,
  UnknownNodeRef,
  DuplicateNodeId,
  ParseError,
  NoSuchPlaceholder,
  MultiplePlaceholderMatches,
  InnerMissingEntry,
  // chain engine
  SpanMismatch,
  PlaceholderMissing,
  NoBlockFound,
  IterationLimitExceeded,
  BackendError,
  FusionError,
  // AI units
  UnparseableOutput,
  EmptyHierarchy,
  SpanNotFound,
  ValidationFailed,
  // completion gateway
  CassetteMiss,
  HttpError,
  Timeout,
  UnsupportedUnit,
  // knowledge base
  MissingKindSet,
  InvalidExample,
  UnknownKind,
  // evaluation harness
  NoEligibleSite,
  EmptyGold,
  GoldMissing,
  // io / configuration
  IoError,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cfgchain
