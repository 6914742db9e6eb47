#include "svaa/birdseye.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "svaa/error.hpp"

namespace svaa {
namespace {

struct BoxSum {
  GlobalId id = 0;
  BoundingBox sum;
  std::size_t n = 0;
};

// Groups one window's human records by global id and projects each mean box.
void project_window(std::span<const DetectionRecord> recs, const CameraConfig& cam, Timestamp window_start,
                    std::vector<BoxSum>& scratch, std::vector<BevPoint>& out) {
  scratch.clear();
  for (const auto& r : recs) {
    if (!r.is_human()) continue;
    auto it = std::find_if(scratch.begin(), scratch.end(), [&](const BoxSum& b) { return b.id == r.global_id; });
    if (it == scratch.end()) {
      scratch.push_back({r.global_id, {}, 0});
      it = scratch.end() - 1;
    }
    it->sum.x += r.bbox.x;
    it->sum.y += r.bbox.y;
    it->sum.w += r.bbox.w;
    it->sum.h += r.bbox.h;
    ++it->n;
  }
  std::sort(scratch.begin(), scratch.end(), [](const BoxSum& a, const BoxSum& b) { return a.id < b.id; });

  DetectionRecord mean;
  mean.camera_id = cam.camera_id;
  mean.record_time = window_start;
  for (const auto& b : scratch) {
    double n = static_cast<double>(b.n);
    mean.global_id = b.id;
    mean.bbox = {b.sum.x / n, b.sum.y / n, b.sum.w / n, b.sum.h / n};
    auto p = bev_transform(mean, cam);
    p.window_start = window_start;
    out.push_back(p);
  }
}

}  // namespace

void CameraConfig::validate() const {
  if (camera_id == 0) throw Error(ErrorCode::InvalidConfig, "camera_id must be positive");
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidConfig, "camera " + std::to_string(camera_id) + ": resolution must be positive");
  }
  if (!(min_teta > 0.0 && min_teta < max_teta && max_teta < 90.0)) {
    throw Error(ErrorCode::InvalidConfig,
                "camera " + std::to_string(camera_id) + ": need 0 < min_teta < max_teta < 90 degrees");
  }
}

double CameraConfig::mid_angle_radians() const { return (min_teta + max_teta) / 2.0 * std::numbers::pi / 180.0; }

double scale_factor(double normalized_h, const CameraConfig& cam) {
  cam.validate();
  if (std::isnan(normalized_h)) throw Error(ErrorCode::InvalidArgument, "normalized height is NaN");
  return std::tan(cam.mid_angle_radians()) / std::max(normalized_h, kMinNormalizedHeight);
}

double max_depth(const CameraConfig& cam) { return scale_factor(0.0, cam); }

BevPoint bev_transform(const DetectionRecord& record, const CameraConfig& cam) {
  if (record.camera_id != cam.camera_id) {
    throw Error(ErrorCode::CameraMismatch, "record of camera " + std::to_string(record.camera_id) +
                                               " projected with config of camera " + std::to_string(cam.camera_id));
  }
  validate_bbox_in_frame(record.bbox, cam.width, cam.height);
  double normalized_h = record.bbox.h / cam.height;
  double depth = scale_factor(normalized_h, cam);
  double lateral = record.bbox.center_x() / cam.width - 0.5;
  return {record.global_id, align_to_interval(record.record_time), lateral * depth, depth};
}

std::vector<BevPoint> window_bev(const StoreSnapshot& store, CameraId camera, const CameraConfig& cam,
                                 Timestamp window_start) {
  if (camera != cam.camera_id) {
    throw Error(ErrorCode::CameraMismatch, "camera " + std::to_string(camera) + " does not match its config");
  }
  window_start = align_to_interval(window_start);
  std::vector<BoxSum> scratch;
  std::vector<BevPoint> out;
  project_window(store.camera_range(camera, window_start, window_start + kIntervalLength), cam, window_start,
                 scratch, out);
  return out;
}

std::vector<BevPoint> range_bev(const StoreSnapshot& store, const CameraConfig& cam, Timestamp t0, Timestamp t1) {
  t0 = align_to_interval(t0);
  t1 = align_to_interval(t1);
  auto recs = store.camera_range(cam.camera_id, t0, t1);
  std::vector<BoxSum> scratch;
  std::vector<BevPoint> out;
  auto it = recs.begin();
  while (it != recs.end()) {
    Timestamp start = align_to_interval(it->record_time);
    auto end = std::find_if(it, recs.end(), [&](const DetectionRecord& r) { return r.record_time >= start + kIntervalLength; });
    project_window({it, end}, cam, start, scratch, out);
    it = end;
  }
  return out;
}

std::vector<BevPoint> daily_bev(const StoreSnapshot& store, const CameraConfig& cam, std::chrono::sys_days date) {
  return range_bev(store, cam, Timestamp{date}, Timestamp{date + std::chrono::days{1}});
}

}  // namespace svaa
