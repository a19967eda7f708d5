#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace finmem {

/// Calendar day, stored as days since 1970-01-01 (proleptic Gregorian).
/// Whole-day arithmetic only; all elapsed-time quantities in the scoring
/// kernels are calendar-day differences between two Dates.
class Date {
 public:
  Date() = default;

  static Date from_days(std::int64_t days) { return Date(days); }
  static Date from_ymd(int year, int month, int day);

  /// Parses ISO-8601 "YYYY-MM-DD". Returns nullopt on any deviation.
  static std::optional<Date> try_parse(std::string_view iso);
  /// As try_parse, but throws std::invalid_argument.
  static Date parse(std::string_view iso);

  std::string to_string() const;  // ISO-8601
  std::int64_t days_since_epoch() const { return days_; }

  struct Ymd {
    int year;
    int month;
    int day;
  };
  Ymd ymd() const;

  friend auto operator<=>(Date, Date) = default;

  Date operator+(std::int64_t days) const { return Date(days_ + days); }
  Date operator-(std::int64_t days) const { return Date(days_ - days); }
  /// Whole calendar days from other to *this.
  std::int64_t operator-(Date other) const { return days_ - other.days_; }

 private:
  explicit Date(std::int64_t days) : days_(days) {}
  std::int64_t days_ = 0;
};

}  // namespace finmem
