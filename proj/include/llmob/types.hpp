#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "llmob/error.hpp"

namespace llmob {

using UserId = std::string;
using LocationId = std::uint32_t;

// Calendar date. Thin wrapper over std::chrono's civil calendar so that day
// arithmetic, weekday and day-of-year are exact and platform-independent.
class Date {
 public:
  Date() = default;
  Date(int year, int month, int day);

  static Date parse(const std::string& iso);  // "YYYY-MM-DD"
  static Date from_serial(int days_since_epoch);

  int year() const noexcept { return year_; }
  int month() const noexcept { return month_; }
  int day() const noexcept { return day_; }

  // Days since 1970-01-01; negative before the epoch.
  int serial() const noexcept;
  // ISO weekday, Monday = 1 ... Sunday = 7.
  int weekday() const noexcept;
  bool is_weekend() const noexcept { return weekday() >= 6; }
  // 1-based day of year, 1..366.
  int day_of_year() const noexcept;

  Date add_days(int n) const { return from_serial(serial() + n); }
  std::string iso() const;

  friend auto operator<=>(const Date& a, const Date& b) = default;

 private:
  std::int16_t year_ = 1970;
  std::int8_t month_ = 1;
  std::int8_t day_ = 1;
};

// One timestamped visit record, minute precision.
struct CheckIn {
  UserId user;
  double lat = 0.0;
  double lon = 0.0;
  std::string name;      // location name as it appears in the data
  std::string category;  // top-level activity category
  Date date;
  int minute = 0;  // minutes since local midnight, 0..1439
};

// One visit inside a discretized day: location at a 10-minute time bin.
struct Step {
  LocationId loc = 0;
  int bin = 0;

  friend bool operator==(const Step&, const Step&) = default;
};

// Time-ordered sequence of location choices for one person on one date.
// Invariant: step bins strictly increasing.
struct DailyTrajectory {
  UserId user;
  Date date;
  std::vector<Step> steps;

  friend bool operator==(const DailyTrajectory&, const DailyTrajectory&) = default;
};

inline constexpr int kMinutesPerDay = 1440;
inline constexpr int kDefaultIntervalMinutes = 10;
inline constexpr int kDefaultBinsPerDay = kMinutesPerDay / kDefaultIntervalMinutes;

// "H:MM", hour not zero-padded (plan syntax: "9:10").
std::string minute_to_hmm(int minute);
// "HH:MM", zero-padded (prior text: "08:00").
std::string minute_to_hhmm(int minute);
// Parses "H:MM" / "HH:MM" into minutes since midnight; throws Error(plan_time).
int parse_hmm(const std::string& text);

}  // namespace llmob
