#include "svaa/bucket.hpp"

namespace svaa {

std::string_view to_string(DayClass c) noexcept {
  return c == DayClass::Weekday ? "WEEKDAY" : "WEEKEND_OR_HOLIDAY";
}

DayClass HolidayCalendar::classify(std::chrono::sys_days day) const {
  std::chrono::weekday wd{day};
  if (wd == std::chrono::Saturday || wd == std::chrono::Sunday || is_holiday(day)) {
    return DayClass::WeekendOrHoliday;
  }
  return DayClass::Weekday;
}

BucketKey bucket_for(CameraId camera, Timestamp t, const HolidayCalendar& calendar) {
  return {camera, hour_of_day(t), calendar.classify(date_of(t))};
}

}  // namespace svaa
