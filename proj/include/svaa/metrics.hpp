#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svaa/store.hpp"

namespace svaa {

/// camera_id -> location label. Its key set is the set of configured cameras.
class LocationMap {
 public:
  LocationMap() = default;
  explicit LocationMap(std::map<CameraId, std::string> labels);

  void set(CameraId camera, std::string label);
  bool has_camera(CameraId camera) const { return labels_.count(camera) != 0; }
  bool has_location(const std::string& label) const;
  const std::string& location_of(CameraId camera) const;
  std::set<CameraId> cameras_at(const std::string& label) const;
  std::set<CameraId> cameras() const;
  const std::map<CameraId, std::string>& labels() const { return labels_; }

 private:
  std::map<CameraId, std::string> labels_;
};

/// Which cameras a grouped metric aggregates over.
struct Group {
  enum class Kind { Camera, Location, All };

  Kind kind = Kind::All;
  CameraId camera = 0;
  std::string location;

  static Group all() { return {}; }
  static Group of_camera(CameraId id) { return {Kind::Camera, id, {}}; }
  static Group of_location(std::string label) { return {Kind::Location, 0, std::move(label)}; }
};

/// Throws UnknownCamera / UnknownLocation when the group is not configured.
CameraSelection resolve_group(const Group& group, const LocationMap& locations);

struct HourlyProfile {
  struct Hour {
    double mean = 0.0;
    std::size_t samples = 0;  // (date, hour) cells averaged
  };
  // Hours with no fully covered cell stay empty.
  std::array<std::optional<Hour>, 24> hours{};

  std::optional<double> mean(int hour) const {
    const auto& h = hours.at(static_cast<std::size_t>(hour));
    return h ? std::optional<double>(h->mean) : std::nullopt;
  }
};

struct CumulativePoint {
  Timestamp bucket_start{};
  std::size_t cumulative = 0;

  bool operator==(const CumulativePoint&) const = default;
};

struct HourRank {
  int hour = 0;
  double mean = 0.0;

  bool operator==(const HourRank&) const = default;
};

inline constexpr Seconds kDefaultStaleness{5};

/// Distinct people across every camera with record_time in (now - staleness, now].
std::size_t current_count(const StoreSnapshot& store, Timestamp now, Micros staleness = kDefaultStaleness);

/// Per hour of day: mean over calendar dates of the group's distinct people
/// in that (date, hour). Only hours lying fully inside [t0, t1) contribute.
HourlyProfile hourly_average(const StoreSnapshot& store, const Group& group, const LocationMap& locations,
                             Timestamp t0, Timestamp t1);

/// Cumulative distinct people across all cameras from t0 through the end of
/// each bucket. Bounds are aligned down to the 5-second grid; the bucket
/// must divide the aligned span.
std::vector<CumulativePoint> total_over_time(const StoreSnapshot& store, Timestamp t0, Timestamp t1, Micros bucket);

/// Top-k hours of the hourly profile by mean, descending; ties take the
/// smaller hour first.
std::vector<HourRank> rank_hours(const HourlyProfile& profile, std::size_t k);

std::vector<HourRank> peak_hours(const StoreSnapshot& store, const Group& group, const LocationMap& locations,
                                 Timestamp t0, Timestamp t1, std::size_t k);

}  // namespace svaa
