#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "svaa/bucket.hpp"
#include "svaa/store.hpp"

namespace svaa {

using Count = std::uint32_t;

/// Nearest-rank percentile: the value at 1-based rank ceil(p/100 * n) of the
/// ascending order. p must lie in (0, 100]. Throws EmptyHistory on empty input.
Count percentile_nearest_rank(std::span<const Count> history, double p);

/// 1-based nearest rank for a sample of size n.
std::size_t nearest_rank(double p, std::size_t n);

/// Bounded FIFO of past interval counts with an order-statistics index.
/// Interval counts are small integers, so a value->multiplicity map makes
/// percentile queries proportional to the number of distinct values.
class RollingHistory {
 public:
  explicit RollingHistory(std::size_t capacity);

  /// Appends, evicting the oldest sample once capacity is exceeded.
  void push(Count count);

  std::size_t size() const { return fifo_.size(); }
  bool empty() const { return fifo_.empty(); }
  std::size_t capacity() const { return capacity_; }

  Count percentile(double p) const;
  Count max() const;

  /// Retained samples, oldest first.
  std::vector<Count> values() const { return {fifo_.begin(), fifo_.end()}; }

 private:
  std::size_t capacity_;
  std::deque<Count> fifo_;
  std::map<Count, std::size_t> multiplicity_;
};

enum class OccupancyLevel { Unknown, Low, Normal, High };

std::string_view to_string(OccupancyLevel level) noexcept;

struct OccupancyParams {
  std::size_t min_samples = 20;
  std::size_t capacity = 10080;
};

struct OccupancyResult {
  OccupancyLevel level = OccupancyLevel::Unknown;
  // Thresholds are absent while the history is below min_samples.
  std::optional<Count> p25;
  std::optional<Count> p75;
  std::size_t history_size = 0;
};

/// Low iff count <= p25, Normal iff p25 < count <= p75, High otherwise.
/// Returns Unknown (cold start) when history holds fewer than min_samples.
OccupancyResult classify_occupancy(Count count, const RollingHistory& history, std::size_t min_samples);

/// Per-bucket histories.
class OccupancyHistory {
 public:
  explicit OccupancyHistory(std::size_t capacity = OccupancyParams{}.capacity) : capacity_(capacity) {}

  void update_history(const BucketKey& key, Count count);
  /// nullptr when the bucket has never been updated.
  const RollingHistory* find(const BucketKey& key) const;
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::map<BucketKey, RollingHistory> buckets_;
};

struct OccupancyReading {
  Timestamp window_start{};
  BucketKey bucket;
  Count count = 0;
  OccupancyResult result;
};

/// Streaming occupancy indicator: each observation is classified against
/// its bucket's history and only then appended to it.
class OccupancyIndicator {
 public:
  OccupancyIndicator(OccupancyParams params, HolidayCalendar calendar);

  OccupancyReading observe(CameraId camera, Timestamp window_start, Count count);
  /// Classifies without updating.
  OccupancyReading peek(CameraId camera, Timestamp window_start, Count count) const;

  const OccupancyHistory& history() const { return history_; }
  const OccupancyParams& params() const { return params_; }

 private:
  OccupancyParams params_;
  HolidayCalendar calendar_;
  OccupancyHistory history_;
};

/// Replays the interval counts of one camera over [t0, t1) through the indicator.
std::vector<OccupancyReading> replay_occupancy(const StoreSnapshot& store, CameraId camera, Timestamp t0,
                                               Timestamp t1, OccupancyIndicator& indicator);

}  // namespace svaa
