#include "finmem/errors.hpp"

namespace finmem {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::DuplicateDate: return "DuplicateDate";
    case Errc::NonPositivePrice: return "NonPositivePrice";
    case Errc::MissingField: return "MissingField";
    case Errc::UnknownKind: return "UnknownKind";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::NoNextDay: return "NoNextDay";
    case Errc::DateNotFound: return "DateNotFound";
    case Errc::InsufficientHistory: return "InsufficientHistory";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ProviderUnavailable: return "ProviderUnavailable";
    case Errc::EmptyText: return "EmptyText";
    case Errc::FutureEvent: return "FutureEvent";
    case Errc::UnknownEventId: return "UnknownEventId";
    case Errc::ValidationExhausted: return "ValidationExhausted";
    case Errc::MalformedRulebook: return "MalformedRulebook";
    case Errc::UnknownTemplate: return "UnknownTemplate";
    case Errc::MissingSlot: return "MissingSlot";
    case Errc::UnknownTicker: return "UnknownTicker";
    case Errc::EmptyWindow: return "EmptyWindow";
    case Errc::WindowOutOfRange: return "WindowOutOfRange";
    case Errc::OverlappingWindows: return "OverlappingWindows";
    case Errc::EmptyLedger: return "EmptyLedger";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

ErrorCategory errc_category(Errc code) {
  switch (code) {
    case Errc::InvalidConfig:
    case Errc::WindowOutOfRange:
    case Errc::OverlappingWindows:
      return ErrorCategory::Config;
    case Errc::ProviderUnavailable:
    case Errc::ValidationExhausted:
      return ErrorCategory::Provider;
    case Errc::MalformedRow:
    case Errc::DuplicateDate:
    case Errc::NonPositivePrice:
    case Errc::MissingField:
    case Errc::UnknownKind:
    case Errc::DuplicateId:
    case Errc::MalformedRulebook:
    case Errc::SchemaMismatch:
    case Errc::IoError:
    case Errc::UnknownTicker:
      return ErrorCategory::Data;
    default:
      return ErrorCategory::Internal;
  }
}

}  // namespace finmem
