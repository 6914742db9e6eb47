#include "svaa/anomaly.hpp"

#include <algorithm>
#include <cmath>

namespace svaa {

double RunningMoments::sample_std() const {
  if (n_ < 2) return 0.0;
  return std::sqrt(std::max(0.0, m2_) / static_cast<double>(n_ - 1));
}

AnomalyVerdict anomaly_check(const RunningMoments& stats, Count count, const AnomalyParams& params) {
  AnomalyVerdict v;
  v.n = stats.n();
  v.mean = stats.mean();
  v.std = stats.sample_std();
  v.insufficient_data = v.n < params.min_samples;
  double x = static_cast<double>(count);
  v.z_score = v.std > 0.0 ? (x - v.mean) / v.std : 0.0;
  // With std == 0 this reduces to count > mean: any rise over a constant
  // history is flagged.
  v.is_anomaly = !v.insufficient_data && x > v.mean + params.sigma_multiplier * v.std;
  return v;
}

void AnomalyStats::stats_update(const BucketKey& key, Count count) {
  if (count == 0) return;
  buckets_[key].add(static_cast<double>(count));
}

const RunningMoments& AnomalyStats::at(const BucketKey& key) const {
  static const RunningMoments kEmpty;
  auto it = buckets_.find(key);
  return it == buckets_.end() ? kEmpty : it->second;
}

AnomalyDetector::AnomalyDetector(AnomalyParams params, HolidayCalendar calendar)
    : params_(params), calendar_(std::move(calendar)) {}

AnomalyReading AnomalyDetector::observe(CameraId camera, Timestamp window_start, Count count) {
  AnomalyReading reading{window_start, bucket_for(camera, window_start, calendar_), count, {}};
  reading.verdict = anomaly_check(stats_.at(reading.bucket), count, params_);
  stats_.stats_update(reading.bucket, count);
  return reading;
}

std::vector<AnomalyReading> replay_anomaly(const StoreSnapshot& store, CameraId camera, Timestamp t0, Timestamp t1,
                                           AnomalyDetector& detector) {
  std::vector<AnomalyReading> out;
  for (const auto& ic : store.interval_counts(camera, t0, t1)) {
    out.push_back(detector.observe(camera, ic.window_start, static_cast<Count>(ic.count)));
  }
  return out;
}

}  // namespace svaa
