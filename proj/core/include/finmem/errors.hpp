#pragma once

#include <stdexcept>
#include <string>

namespace finmem {

/// Broad failure categories; the CLI maps these to process exit codes
/// (config -> 2, data -> 3, provider -> 4).
enum class ErrorCategory { Config, Data, Provider, Internal };

enum class Errc {
  // market data
  MalformedRow,
  DuplicateDate,
  NonPositivePrice,
  MissingField,
  UnknownKind,
  DuplicateId,
  NoNextDay,
  DateNotFound,
  InsufficientHistory,
  // embeddings
  DimensionMismatch,
  ProviderUnavailable,
  // memory store
  EmptyText,
  FutureEvent,
  UnknownEventId,
  // llm gateway
  ValidationExhausted,
  MalformedRulebook,
  UnknownTemplate,
  MissingSlot,
  // agent
  UnknownTicker,
  EmptyWindow,
  // backtest
  WindowOutOfRange,
  OverlappingWindows,
  EmptyLedger,
  InsufficientData,
  // cli / reports
  SchemaMismatch,
  InvalidConfig,
  IoError,
};

const char* errc_name(Errc code);
ErrorCategory errc_category(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return errc_category(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace finmem
