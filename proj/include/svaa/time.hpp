#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace svaa {

using Micros = std::chrono::microseconds;
using Seconds = std::chrono::seconds;

/// UTC instant with microsecond resolution.
using Timestamp = std::chrono::sys_time<Micros>;

inline constexpr Seconds kIntervalLength{5};

/// Parses an RFC 3339 timestamp. Accepts 'T' or a single space between date
/// and time, up to 6 fractional digits, and a 'Z' or numeric offset (the
/// result is normalized to UTC). Throws Error(InvalidTimestamp).
Timestamp parse_timestamp(std::string_view text);

/// Canonical form: "YYYY-MM-DDTHH:MM:SS[.ffffff]Z"; the fraction is omitted
/// when zero. parse_timestamp(format_timestamp(t)) == t for every t.
std::string format_timestamp(Timestamp t);

/// Parses "YYYY-MM-DD" into the UTC midnight of that date.
std::chrono::sys_days parse_date(std::string_view text);
std::string format_date(std::chrono::sys_days d);

/// Floors to a multiple of `step` past the UTC epoch.
Timestamp align_down(Timestamp t, Micros step);

inline Timestamp align_to_interval(Timestamp t) { return align_down(t, kIntervalLength); }

inline std::chrono::sys_days date_of(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }

inline int hour_of_day(Timestamp t) {
  auto since_midnight = t - date_of(t);
  return static_cast<int>(std::chrono::floor<std::chrono::hours>(since_midnight).count());
}

inline std::int64_t to_unix_micros(Timestamp t) { return t.time_since_epoch().count(); }
inline Timestamp from_unix_micros(std::int64_t us) { return Timestamp{Micros{us}}; }

}  // namespace svaa
