#include "xenomon/date.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "xenomon/error.hpp"

namespace xenomon {
namespace {

using namespace std::chrono;

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return !s.empty();
}

std::int64_t to_int(std::string_view s) {
  std::int64_t v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

}  // namespace

Date Date::from_ymd(int y, unsigned m, unsigned d) {
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) {
    throw ValidationError("invalid calendar date " + std::to_string(y) + "-" + std::to_string(m) +
                          "-" + std::to_string(d));
  }
  return Date{ymd};
}

std::optional<Date> Date::from_yyyymmdd(std::int64_t value) {
  if (value < 10000101 || value > 99991231) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(value / 10000)},
                           std::chrono::month{static_cast<unsigned>((value / 100) % 100)},
                           std::chrono::day{static_cast<unsigned>(value % 100)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

std::optional<Date> Date::parse(std::string_view text) {
  if (text.size() == 8 && all_digits(text)) return from_yyyymmdd(to_int(text));
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    const auto y = text.substr(0, 4), m = text.substr(5, 2), d = text.substr(8, 2);
    if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return std::nullopt;
    return from_yyyymmdd(to_int(y) * 10000 + to_int(m) * 100 + to_int(d));
  }
  return std::nullopt;
}

std::int64_t Date::yyyymmdd() const noexcept {
  return static_cast<std::int64_t>(year()) * 10000 + month() * 100 + day();
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
  return buf;
}

Date Date::first_of_month() const noexcept {
  const auto ymd = this->ymd();
  return Date{std::chrono::year_month_day{ymd.year(), ymd.month(), std::chrono::day{1}}};
}

Date Date::next_month() const noexcept {
  const auto ymd = this->ymd();
  return Date{std::chrono::year_month_day{ymd.year() / ymd.month() / std::chrono::day{1}} + months{1}};
}

Date Date::last_of_month() const noexcept {
  const auto ymd = this->ymd();
  return Date{std::chrono::year_month_day{std::chrono::year_month_day_last{ymd.year(), month_day_last{ymd.month()}}}};
}

std::optional<Timestamp> Timestamp::from_yyyymmddhhmmss(std::int64_t value) {
  const auto date = Date::from_yyyymmdd(value / 1000000);
  if (!date) return std::nullopt;
  const std::int64_t hms = value % 1000000;
  const std::int64_t h = hms / 10000, m = (hms / 100) % 100, s = hms % 100;
  if (h > 23 || m > 59 || s > 59) return std::nullopt;
  return Timestamp{sys_seconds{date->days()} + hours{h} + minutes{m} + seconds{s}};
}

std::optional<Timestamp> Timestamp::parse(std::string_view text) {
  if (text.size() == 14 && all_digits(text)) return from_yyyymmddhhmmss(to_int(text));
  // 20150902T143000Z
  if (text.size() == 16 && text[8] == 'T' && text[15] == 'Z') {
    std::string compact{text.substr(0, 8)};
    compact += text.substr(9, 6);
    if (!all_digits(compact)) return std::nullopt;
    return from_yyyymmddhhmmss(to_int(compact));
  }
  // 2015-09-02T14:30:00Z
  if (text.size() == 20 && text[10] == 'T' && text[13] == ':' && text[16] == ':' && text[19] == 'Z') {
    const auto date = Date::parse(text.substr(0, 10));
    if (!date) return std::nullopt;
    std::string compact = std::to_string(date->yyyymmdd());
    compact += text.substr(11, 2);
    compact += text.substr(14, 2);
    compact += text.substr(17, 2);
    if (!all_digits(compact)) return std::nullopt;
    return from_yyyymmddhhmmss(to_int(compact));
  }
  return std::nullopt;
}

Timestamp Timestamp::now() {
  return Timestamp{floor<seconds>(system_clock::now())};
}

Date Timestamp::date() const noexcept { return Date{floor<days>(time_)}; }

std::int64_t Timestamp::yyyymmddhhmmss() const noexcept {
  const auto d = floor<days>(time_);
  const hh_mm_ss hms{time_ - d};
  return Date{d}.yyyymmdd() * 1000000 + hms.hours().count() * 10000 + hms.minutes().count() * 100 +
         hms.seconds().count();
}

std::string Timestamp::iso() const {
  const auto d = floor<days>(time_);
  const hh_mm_ss hms{time_ - d};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", Date{d}.iso().c_str(),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

DateRange DateRange::checked(Date start, Date end) {
  if (end < start) {
    throw DateRangeError("date range start " + start.iso() + " is after end " + end.iso());
  }
  return DateRange{start, end};
}

}  // namespace xenomon
