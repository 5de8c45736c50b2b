#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace xenomon {

// UTC calendar day.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
  constexpr explicit Date(std::chrono::year_month_day ymd) : days_(ymd) {}

  // Throws ValidationError for impossible dates.
  static Date from_ymd(int year, unsigned month, unsigned day);
  // 20150902 -> 2015-09-02. Returns nullopt for invalid calendar dates.
  static std::optional<Date> from_yyyymmdd(std::int64_t value);
  // "2015-09-02" or "20150902".
  static std::optional<Date> parse(std::string_view text);

  std::chrono::sys_days days() const noexcept { return days_; }
  std::chrono::year_month_day ymd() const noexcept { return std::chrono::year_month_day{days_}; }
  int year() const noexcept { return static_cast<int>(ymd().year()); }
  unsigned month() const noexcept { return static_cast<unsigned>(ymd().month()); }
  unsigned day() const noexcept { return static_cast<unsigned>(ymd().day()); }

  std::int64_t yyyymmdd() const noexcept;
  std::string iso() const;  // YYYY-MM-DD

  Date first_of_month() const noexcept;
  Date next_day() const noexcept { return Date{days_ + std::chrono::days{1}}; }
  Date next_month() const noexcept;
  Date last_of_month() const noexcept;

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

// UTC instant at one-second resolution, written YYYYMMDDHHMMSS in GDELT files.
class Timestamp {
 public:
  constexpr Timestamp() = default;
  constexpr explicit Timestamp(std::chrono::sys_seconds t) : time_(t) {}

  static std::optional<Timestamp> from_yyyymmddhhmmss(std::int64_t value);
  // "20150902143000", "2015-09-02T14:30:00Z" or "20150902T143000Z".
  static std::optional<Timestamp> parse(std::string_view text);
  static Timestamp start_of(Date d) { return Timestamp{std::chrono::sys_seconds{d.days()}}; }
  static Timestamp now();

  std::chrono::sys_seconds time() const noexcept { return time_; }
  Date date() const noexcept;
  std::int64_t yyyymmddhhmmss() const noexcept;
  std::string iso() const;  // YYYY-MM-DDTHH:MM:SSZ

  friend constexpr auto operator<=>(const Timestamp&, const Timestamp&) = default;

 private:
  std::chrono::sys_seconds time_{};
};

// Inclusive date interval.
struct DateRange {
  Date start;
  Date end;

  // Throws DateRangeError when start > end.
  static DateRange checked(Date start, Date end);

  bool contains(Date d) const noexcept { return start <= d && d <= end; }
  friend bool operator==(const DateRange&, const DateRange&) = default;
};

}  // namespace xenomon
