#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "svaa/bucket.hpp"
#include "svaa/record.hpp"

namespace svaa {

/// Arrival and track model of one simulated camera.
struct CameraProfile {
  CameraId camera_id = 1;
  int width = 1920;
  int height = 1080;
  std::array<double, 24> hourly_rate{};  // persons per hour, by UTC hour of day
  double weekend_multiplier = 1.0;       // applied on weekends and holidays
  double duration_min = 10.0;            // track duration, seconds
  double duration_max = 40.0;
  double height_min = 0.1;  // bbox height as a fraction of frame height
  double height_max = 0.5;
  int emission_period = 1;         // seconds between records of a track
  double other_class_rate = 0.0;   // non-human objects per hour (class 2)
};

struct SimProfile {
  std::vector<CameraProfile> cameras;
  std::set<std::chrono::sys_days> holidays;
  std::uint64_t seed = 1;

  /// Throws InvalidProfile.
  void validate() const;
};

struct TruthKey {
  std::chrono::sys_days date{};
  int hour = 0;
  CameraId camera_id = 0;

  auto operator<=>(const TruthKey&) const = default;
};

/// True distinct persons per (date, hour, camera). Cells with no person are absent.
struct GroundTruth {
  std::map<TruthKey, std::size_t> distinct;
  std::size_t persons = 0;

  std::size_t at(const TruthKey& key) const {
    auto it = distinct.find(key);
    return it == distinct.end() ? 0 : it->second;
  }
  /// "date,hour,camera_id,distinct" rows sorted by key.
  std::string to_csv() const;
};

struct SimulationResult {
  std::vector<DetectionRecord> records;  // sorted by (time, camera, global id)
  GroundTruth truth;
};

/// Version of the random stream; bumped whenever generated output changes.
inline constexpr int kSimStreamVersion = 1;

/// Arrivals follow a Poisson process whose rate is piecewise constant per
/// hour. Output is a pure function of (profile, t0, t1).
SimulationResult generate(const SimProfile& profile, Timestamp t0, Timestamp t1);

/// Eight cameras across two buildings and a parking lot, midday peak at
/// hour 12, weekend multiplier 0.25, holidays 2023-10-16 and 2023-10-17.
SimProfile default_profile(std::uint64_t seed = 1);

/// Default simulation span: 2023-10-12T00:00:00Z to 2023-10-20T00:00:00Z.
Timestamp default_sim_start();
Timestamp default_sim_end();

}  // namespace svaa
