#pragma once

#include <chrono>
#include <compare>
#include <set>
#include <string>
#include <string_view>

#include "svaa/record.hpp"

namespace svaa {

enum class DayClass { Weekday, WeekendOrHoliday };

std::string_view to_string(DayClass c) noexcept;

/// Saturdays, Sundays and the configured holiday dates (UTC) are
/// WeekendOrHoliday.
class HolidayCalendar {
 public:
  HolidayCalendar() = default;
  explicit HolidayCalendar(std::set<std::chrono::sys_days> holidays) : holidays_(std::move(holidays)) {}

  void add(std::chrono::sys_days day) { holidays_.insert(day); }
  bool is_holiday(std::chrono::sys_days day) const { return holidays_.count(day) != 0; }
  DayClass classify(std::chrono::sys_days day) const;
  const std::set<std::chrono::sys_days>& holidays() const { return holidays_; }

 private:
  std::set<std::chrono::sys_days> holidays_;
};

/// Key of the historical state behind occupancy and anomaly decisions.
struct BucketKey {
  CameraId camera_id = 0;
  int hour_of_day = 0;
  DayClass day_class = DayClass::Weekday;

  auto operator<=>(const BucketKey&) const = default;
};

BucketKey bucket_for(CameraId camera, Timestamp t, const HolidayCalendar& calendar);

}  // namespace svaa
