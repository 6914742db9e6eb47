#include "svaa/occupancy.hpp"

#include <algorithm>
#include <cmath>

#include "svaa/error.hpp"

namespace svaa {

std::size_t nearest_rank(double p, std::size_t n) {
  if (!(p > 0.0 && p <= 100.0)) throw Error(ErrorCode::InvalidArgument, "percentile must lie in (0, 100]");
  if (n == 0) throw Error(ErrorCode::EmptyHistory, "percentile of an empty history");
  double exact = p * static_cast<double>(n) / 100.0;
  // p * n / 100 is often integral in exact arithmetic (p = 25, n = 4) but
  // not in binary floating point; snap those cases before taking the ceiling.
  double nearest = std::round(exact);
  double rank = std::fabs(exact - nearest) <= 1e-9 * std::max(1.0, exact) ? nearest : std::ceil(exact);
  return std::clamp(static_cast<std::size_t>(rank), std::size_t{1}, n);
}

Count percentile_nearest_rank(std::span<const Count> history, double p) {
  std::size_t rank = nearest_rank(p, history.size());
  std::vector<Count> work(history.begin(), history.end());
  auto nth = work.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(work.begin(), nth, work.end());
  return *nth;
}

RollingHistory::RollingHistory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::InvalidArgument, "history capacity must be positive");
}

void RollingHistory::push(Count count) {
  fifo_.push_back(count);
  ++multiplicity_[count];
  if (fifo_.size() > capacity_) {
    Count oldest = fifo_.front();
    fifo_.pop_front();
    auto it = multiplicity_.find(oldest);
    if (--it->second == 0) multiplicity_.erase(it);
  }
}

Count RollingHistory::percentile(double p) const {
  std::size_t rank = nearest_rank(p, fifo_.size());
  std::size_t seen = 0;
  for (const auto& [value, n] : multiplicity_) {
    seen += n;
    if (seen >= rank) return value;
  }
  return multiplicity_.rbegin()->first;
}

Count RollingHistory::max() const {
  if (fifo_.empty()) throw Error(ErrorCode::EmptyHistory, "max of an empty history");
  return multiplicity_.rbegin()->first;
}

std::string_view to_string(OccupancyLevel level) noexcept {
  switch (level) {
    case OccupancyLevel::Low: return "LOW";
    case OccupancyLevel::Normal: return "NORMAL";
    case OccupancyLevel::High: return "HIGH";
    case OccupancyLevel::Unknown: break;
  }
  return "UNKNOWN";
}

OccupancyResult classify_occupancy(Count count, const RollingHistory& history, std::size_t min_samples) {
  OccupancyResult out;
  out.history_size = history.size();
  if (history.empty() || history.size() < min_samples) return out;
  Count p25 = history.percentile(25.0);
  Count p75 = history.percentile(75.0);
  out.p25 = p25;
  out.p75 = p75;
  if (count <= p25) {
    out.level = OccupancyLevel::Low;
  } else if (count <= p75) {
    out.level = OccupancyLevel::Normal;
  } else {
    out.level = OccupancyLevel::High;
  }
  return out;
}

void OccupancyHistory::update_history(const BucketKey& key, Count count) {
  auto it = buckets_.find(key);
  if (it == buckets_.end()) it = buckets_.emplace(key, RollingHistory(capacity_)).first;
  it->second.push(count);
}

const RollingHistory* OccupancyHistory::find(const BucketKey& key) const {
  auto it = buckets_.find(key);
  return it == buckets_.end() ? nullptr : &it->second;
}

OccupancyIndicator::OccupancyIndicator(OccupancyParams params, HolidayCalendar calendar)
    : params_(params), calendar_(std::move(calendar)), history_(params.capacity) {}

OccupancyReading OccupancyIndicator::peek(CameraId camera, Timestamp window_start, Count count) const {
  OccupancyReading reading{window_start, bucket_for(camera, window_start, calendar_), count, {}};
  if (const auto* h = history_.find(reading.bucket)) {
    reading.result = classify_occupancy(count, *h, params_.min_samples);
  }
  return reading;
}

OccupancyReading OccupancyIndicator::observe(CameraId camera, Timestamp window_start, Count count) {
  auto reading = peek(camera, window_start, count);
  history_.update_history(reading.bucket, count);
  return reading;
}

std::vector<OccupancyReading> replay_occupancy(const StoreSnapshot& store, CameraId camera, Timestamp t0,
                                               Timestamp t1, OccupancyIndicator& indicator) {
  std::vector<OccupancyReading> out;
  for (const auto& ic : store.interval_counts(camera, t0, t1)) {
    out.push_back(indicator.observe(camera, ic.window_start, static_cast<Count>(ic.count)));
  }
  return out;
}

}  // namespace svaa
