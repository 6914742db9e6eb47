#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "svaa/record.hpp"
#include "svaa/store.hpp"

namespace svaa {

/// Frame size and the vertical angular range of one camera, in degrees.
struct CameraConfig {
  CameraId camera_id = 0;
  int width = 0;
  int height = 0;
  double min_teta = 0.0;
  double max_teta = 0.0;
  std::string location;

  /// Throws InvalidConfig unless width, height > 0 and 0 < min < max < 90.
  void validate() const;
  double mid_angle_radians() const;
};

/// Normalized heights below this are clamped.
inline constexpr double kMinNormalizedHeight = 0.01;

/// Ground-plane position of one person in one 5-second window. x is signed
/// (0 on the camera axis); y grows with distance from the camera.
struct BevPoint {
  GlobalId global_id = 0;
  Timestamp window_start{};
  double x = 0.0;
  double y = 0.0;

  bool operator==(const BevPoint&) const = default;
};

/// Depth proxy tan(mid angle) / max(normalized_h, 0.01). Strictly decreasing
/// in normalized_h above the clamp.
double scale_factor(double normalized_h, const CameraConfig& cam);

/// Largest depth scale_factor can produce for this camera.
double max_depth(const CameraConfig& cam);

/// Projects one box: y = scale_factor(h / height), x = (centroid_x / width - 0.5) * y.
/// Throws CameraMismatch or InvalidBBox (box outside the frame).
BevPoint bev_transform(const DetectionRecord& record, const CameraConfig& cam);

/// One point per distinct human global id in the window starting at
/// `window_start` (aligned down): its boxes are averaged component-wise and
/// the mean box is projected once. Sorted by global id.
std::vector<BevPoint> window_bev(const StoreSnapshot& store, CameraId camera, const CameraConfig& cam,
                                 Timestamp window_start);

/// window_bev over every 5-second window of [t0, t1), concatenated in time order.
std::vector<BevPoint> range_bev(const StoreSnapshot& store, const CameraConfig& cam, Timestamp t0, Timestamp t1);

/// range_bev over one UTC calendar day.
std::vector<BevPoint> daily_bev(const StoreSnapshot& store, const CameraConfig& cam, std::chrono::sys_days date);

}  // namespace svaa
