#include "llmob/types.hpp"

#include <charconv>
#include <cstdio>

namespace llmob {

namespace {

std::chrono::year_month_day to_ymd(int y, int m, int d) {
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                     std::chrono::day{unsigned(d)}};
}

}  // namespace

Date::Date(int year, int month, int day)
    : year_(std::int16_t(year)), month_(std::int8_t(month)), day_(std::int8_t(day)) {
  if (!to_ymd(year, month, day).ok()) {
    raise(ErrorCode::parse, "invalid calendar date: " + std::to_string(year) + "-" +
                                std::to_string(month) + "-" + std::to_string(day));
  }
}

Date Date::parse(const std::string& iso) {
  int y = 0, m = 0, d = 0;
  char tail = 0;
  if (std::sscanf(iso.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3) {
    raise(ErrorCode::parse, "invalid date string: \"" + iso + "\" (expected YYYY-MM-DD)");
  }
  return Date(y, m, d);
}

Date Date::from_serial(int days_since_epoch) {
  std::chrono::sys_days sd{std::chrono::days{days_since_epoch}};
  std::chrono::year_month_day ymd{sd};
  Date out;
  out.year_ = std::int16_t(int(ymd.year()));
  out.month_ = std::int8_t(unsigned(ymd.month()));
  out.day_ = std::int8_t(unsigned(ymd.day()));
  return out;
}

int Date::serial() const noexcept {
  return int(std::chrono::sys_days{to_ymd(year_, month_, day_)}.time_since_epoch().count());
}

int Date::weekday() const noexcept {
  std::chrono::weekday wd{std::chrono::sys_days{to_ymd(year_, month_, day_)}};
  return int(wd.iso_encoding());
}

int Date::day_of_year() const noexcept {
  return serial() - Date(year_, 1, 1).serial() + 1;
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", int(year_), int(month_), int(day_));
  return buf;
}

std::string minute_to_hmm(int minute) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%d:%02d", minute / 60, minute % 60);
  return buf;
}

std::string minute_to_hhmm(int minute) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02d:%02d", minute / 60, minute % 60);
  return buf;
}

int parse_hmm(const std::string& text) {
  int h = 0, m = 0;
  char tail = 0;
  int fields = std::sscanf(text.c_str(), "%d:%d%c", &h, &m, &tail);
  if (fields != 2 || text.find(':') == std::string::npos) {
    raise(ErrorCode::plan_time, "time not in H:MM form: \"" + text + "\"");
  }
  // Require exactly two digits for minutes ("9:5" is not a clock time).
  auto colon = text.find(':');
  if (text.size() - colon - 1 != 2) {
    raise(ErrorCode::plan_time, "time not in H:MM form: \"" + text + "\"");
  }
  if (h < 0 || h > 23 || m < 0 || m > 59) {
    raise(ErrorCode::plan_time, "time outside one day: \"" + text + "\"");
  }
  return h * 60 + m;
}

}  // namespace llmob
