#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "svaa/bucket.hpp"
#include "svaa/occupancy.hpp"
#include "svaa/store.hpp"

namespace svaa {

/// Single-pass mean and sum of squared deviations (Welford).
class RunningMoments {
 public:
  void add(double x) {
    ++n_;
    double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  std::uint64_t n() const { return n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  /// (n - 1) denominator; 0 below two samples.
  double sample_std() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct AnomalyParams {
  std::size_t min_samples = 30;
  double sigma_multiplier = 2.0;
};

struct AnomalyVerdict {
  bool is_anomaly = false;
  bool insufficient_data = true;
  double z_score = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::uint64_t n = 0;
};

/// Upper one-sided test against moments gathered before `count`:
/// anomaly iff n >= min_samples and count > mean + k * std.
AnomalyVerdict anomaly_check(const RunningMoments& stats, Count count, const AnomalyParams& params = {});

/// Per-bucket moments of nonzero interval counts.
class AnomalyStats {
 public:
  /// Zero counts are ignored.
  void stats_update(const BucketKey& key, Count count);
  /// Empty moments for buckets never updated.
  const RunningMoments& at(const BucketKey& key) const;

 private:
  std::map<BucketKey, RunningMoments> buckets_;
};

struct AnomalyReading {
  Timestamp window_start{};
  BucketKey bucket;
  Count count = 0;
  AnomalyVerdict verdict;
};

/// Streaming detector: check against the bucket, then absorb the count.
class AnomalyDetector {
 public:
  AnomalyDetector(AnomalyParams params, HolidayCalendar calendar);

  AnomalyReading observe(CameraId camera, Timestamp window_start, Count count);

  const AnomalyStats& stats() const { return stats_; }

 private:
  AnomalyParams params_;
  HolidayCalendar calendar_;
  AnomalyStats stats_;
};

std::vector<AnomalyReading> replay_anomaly(const StoreSnapshot& store, CameraId camera, Timestamp t0, Timestamp t1,
                                           AnomalyDetector& detector);

}  // namespace svaa
