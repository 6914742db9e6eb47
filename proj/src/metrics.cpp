#include "svaa/metrics.hpp"

#include <algorithm>
#include <unordered_set>

namespace svaa {

LocationMap::LocationMap(std::map<CameraId, std::string> labels) {
  for (auto& [camera, label] : labels) set(camera, std::move(label));
}

void LocationMap::set(CameraId camera, std::string label) {
  if (label.empty()) throw Error(ErrorCode::InvalidConfig, "empty location label for camera " + std::to_string(camera));
  labels_[camera] = std::move(label);
}

bool LocationMap::has_location(const std::string& label) const {
  return std::any_of(labels_.begin(), labels_.end(), [&](const auto& kv) { return kv.second == label; });
}

const std::string& LocationMap::location_of(CameraId camera) const {
  auto it = labels_.find(camera);
  if (it == labels_.end()) throw Error(ErrorCode::UnknownCamera, "camera " + std::to_string(camera));
  return it->second;
}

std::set<CameraId> LocationMap::cameras_at(const std::string& label) const {
  std::set<CameraId> out;
  for (const auto& [camera, l] : labels_) {
    if (l == label) out.insert(camera);
  }
  return out;
}

std::set<CameraId> LocationMap::cameras() const {
  std::set<CameraId> out;
  for (const auto& [camera, l] : labels_) out.insert(camera);
  return out;
}

CameraSelection resolve_group(const Group& group, const LocationMap& locations) {
  switch (group.kind) {
    case Group::Kind::Camera:
      if (!locations.has_camera(group.camera)) {
        throw Error(ErrorCode::UnknownCamera, "camera " + std::to_string(group.camera) + " is not configured");
      }
      return CameraSelection::one(group.camera);
    case Group::Kind::Location:
      if (!locations.has_location(group.location)) {
        throw Error(ErrorCode::UnknownLocation, "location '" + group.location + "' is not configured");
      }
      return CameraSelection::of(locations.cameras_at(group.location));
    case Group::Kind::All:
      break;
  }
  return CameraSelection::all();
}

std::size_t current_count(const StoreSnapshot& store, Timestamp now, Micros staleness) {
  if (staleness <= Micros::zero()) throw Error(ErrorCode::InvalidArgument, "staleness must be positive");
  // (now - staleness, now] as a half-open microsecond range.
  return store.distinct_people(CameraSelection::all(), now - staleness + Micros{1}, now + Micros{1});
}

HourlyProfile hourly_average(const StoreSnapshot& store, const Group& group, const LocationMap& locations,
                             Timestamp t0, Timestamp t1) {
  auto selection = resolve_group(group, locations);
  if (t0 > t1) throw Error(ErrorCode::InvertedRange, "hourly_average: t0 after t1");

  std::array<double, 24> sums{};
  std::array<std::size_t, 24> cells{};
  using std::chrono::hours;
  for (auto date = date_of(t0); Timestamp{date} < t1; date += std::chrono::days{1}) {
    for (int h = 0; h < 24; ++h) {
      Timestamp start = Timestamp{date} + hours{h};
      Timestamp end = start + hours{1};
      if (start < t0 || end > t1) continue;
      sums[h] += static_cast<double>(store.distinct_people(selection, start, end));
      ++cells[h];
    }
  }

  HourlyProfile profile;
  for (std::size_t h = 0; h < 24; ++h) {
    if (cells[h] > 0) profile.hours[h] = HourlyProfile::Hour{sums[h] / static_cast<double>(cells[h]), cells[h]};
  }
  return profile;
}

std::vector<CumulativePoint> total_over_time(const StoreSnapshot& store, Timestamp t0, Timestamp t1, Micros bucket) {
  if (t0 > t1) throw Error(ErrorCode::InvertedRange, "total_over_time: t0 after t1");
  if (bucket <= Micros::zero()) throw Error(ErrorCode::InvalidArgument, "bucket must be positive");
  t0 = align_to_interval(t0);
  t1 = align_to_interval(t1);
  if ((t1 - t0) % bucket != Micros::zero()) {
    throw Error(ErrorCode::InvalidArgument, "bucket does not divide the aligned range evenly");
  }

  std::vector<CumulativePoint> out;
  std::unordered_set<GlobalId> seen;
  for (Timestamp start = t0; start < t1; start += bucket) {
    store.for_each_in(CameraSelection::all(), start, start + bucket, [&](const DetectionRecord& r) {
      if (r.is_human()) seen.insert(r.global_id);
    });
    out.push_back({start, seen.size()});
  }
  return out;
}

std::vector<HourRank> rank_hours(const HourlyProfile& profile, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  std::vector<HourRank> ranked;
  for (int h = 0; h < 24; ++h) {
    if (auto m = profile.mean(h)) ranked.push_back({h, *m});
  }
  std::sort(ranked.begin(), ranked.end(), [](const HourRank& a, const HourRank& b) {
    if (a.mean != b.mean) return a.mean > b.mean;
    return a.hour < b.hour;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

std::vector<HourRank> peak_hours(const StoreSnapshot& store, const Group& group, const LocationMap& locations,
                                 Timestamp t0, Timestamp t1, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  return rank_hours(hourly_average(store, group, locations, t0, t1), k);
}

}  // namespace svaa
