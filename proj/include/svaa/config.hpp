#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "svaa/anomaly.hpp"
#include "svaa/birdseye.hpp"
#include "svaa/bucket.hpp"
#include "svaa/heatmap.hpp"
#include "svaa/metrics.hpp"
#include "svaa/occupancy.hpp"
#include "svaa/synth.hpp"

namespace svaa {

struct AppConfig {
  std::filesystem::path store_path = "store";
  std::vector<CameraConfig> cameras;
  HolidayCalendar holidays;
  OccupancyParams occupancy;
  AnomalyParams anomaly;
  HeatmapOptions heatmap;
  double gamma = 1.0;
  Micros staleness = kDefaultStaleness;

  /// Throws InvalidConfig (duplicate ids, bad camera geometry).
  void validate() const;
  LocationMap locations() const;
  /// Throws UnknownCamera.
  const CameraConfig& camera(CameraId id) const;
};

/// JSON document; every key is optional except "cameras". Throws InvalidConfig.
AppConfig parse_config(const std::string& text);
AppConfig load_config(const std::filesystem::path& path);
std::string dump_config(const AppConfig& config);

/// Cameras of the default simulation profile with the locations and holidays
/// that profile uses.
AppConfig default_config();

/// Throws InvalidProfile.
SimProfile parse_profile(const std::string& text);
SimProfile load_profile(const std::filesystem::path& path);
std::string dump_profile(const SimProfile& profile);

}  // namespace svaa
