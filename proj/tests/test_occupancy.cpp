#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "svaa/occupancy.hpp"

using namespace svaa;
using namespace std::chrono;

namespace {

RollingHistory history_of(std::initializer_list<Count> values, std::size_t capacity = 10080) {
  RollingHistory h(capacity);
  for (auto v : values) h.push(v);
  return h;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("nearest-rank percentile examples") {
  std::vector<Count> a{1, 2, 3, 4};
  CHECK(percentile_nearest_rank(a, 25) == 1);
  CHECK(percentile_nearest_rank(a, 75) == 3);
  CHECK(percentile_nearest_rank(a, 100) == 4);
  std::vector<Count> b{0, 0, 0, 1, 1, 1, 2, 3};
  CHECK(percentile_nearest_rank(b, 75) == 1);
  CHECK(percentile_nearest_rank(b, 25) == 0);
  std::vector<Count> one{7};
  CHECK(percentile_nearest_rank(one, 0.001) == 7);
  CHECK(nearest_rank(25, 8) == 2);
  CHECK(nearest_rank(25, 9) == 3);
  CHECK(nearest_rank(100, 9) == 9);

  std::vector<Count> none;
  CHECK(code_of([&] { percentile_nearest_rank(none, 25); }) == ErrorCode::EmptyHistory);
  CHECK(code_of([&] { percentile_nearest_rank(a, 0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { percentile_nearest_rank(a, 100.5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("percentile and RollingHistory agree with a sort oracle") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> size(1, 2000);
  std::uniform_int_distribution<Count> value(0, 60);
  std::uniform_real_distribution<double> pct(0.0, 100.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Count> xs(size(rng));
    for (auto& x : xs) x = value(rng);
    auto h = RollingHistory(xs.size());
    for (auto x : xs) h.push(x);
    for (double p : {25.0, 50.0, 75.0, 100.0, std::max(pct(rng), 1e-3)}) {
      auto want = oracle::sorted_percentile(xs, p);
      REQUIRE(percentile_nearest_rank(xs, p) == want);
      REQUIRE(h.percentile(p) == want);
    }
    CHECK(h.max() == *std::max_element(xs.begin(), xs.end()));
  }
}

TEST_CASE("RollingHistory evicts oldest first") {
  RollingHistory h(3);
  for (Count v : {9u, 1u, 2u, 3u}) h.push(v);
  CHECK(h.size() == 3);
  CHECK(h.values() == std::vector<Count>{1, 2, 3});
  CHECK(h.max() == 3);
  CHECK(h.percentile(100) == 3);

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<Count> value(0, 20);
  RollingHistory w(50);
  std::deque<Count> ref;
  for (int i = 0; i < 2000; ++i) {
    Count v = value(rng);
    w.push(v);
    ref.push_back(v);
    if (ref.size() > 50) ref.pop_front();
    if (i % 37 == 0) {
      std::vector<Count> r(ref.begin(), ref.end());
      REQUIRE(w.percentile(25) == oracle::sorted_percentile(r, 25));
      REQUIRE(w.percentile(75) == oracle::sorted_percentile(r, 75));
    }
  }
}

TEST_CASE("classification bands and cold start") {
  auto weekday = history_of({0, 1, 1, 2, 2, 3, 3, 4});
  auto r = classify_occupancy(2, weekday, 1);
  CHECK(r.level == OccupancyLevel::Normal);
  CHECK(*r.p25 == 1);
  CHECK(*r.p75 == 3);
  CHECK(classify_occupancy(1, weekday, 1).level == OccupancyLevel::Low);
  CHECK(classify_occupancy(3, weekday, 1).level == OccupancyLevel::Normal);
  CHECK(classify_occupancy(4, weekday, 1).level == OccupancyLevel::High);

  auto weekend = history_of({0, 0, 0, 0, 1, 1, 1, 1});
  CHECK(classify_occupancy(2, weekend, 1).level == OccupancyLevel::High);
  CHECK(classify_occupancy(0, weekend, 1).level == OccupancyLevel::Low);

  auto cold = classify_occupancy(2, weekday, 20);
  CHECK(cold.level == OccupancyLevel::Unknown);
  CHECK_FALSE(cold.p25.has_value());
  CHECK(cold.history_size == 8);

  RollingHistory empty(10);
  CHECK(classify_occupancy(0, empty, 0).level == OccupancyLevel::Unknown);
  CHECK(to_string(OccupancyLevel::High) == "HIGH");
}

TEST_CASE("classification is monotone in the count") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<Count> value(0, 15);
  for (int trial = 0; trial < 50; ++trial) {
    RollingHistory h(200);
    for (int i = 0; i < 100; ++i) h.push(value(rng));
    int prev = 0;
    for (Count c = 0; c < 20; ++c) {
      int level = static_cast<int>(classify_occupancy(c, h, 20).level);
      CHECK(level >= prev);
      prev = level;
    }
  }
}

TEST_CASE("indicator classifies before updating and separates buckets") {
  HolidayCalendar cal({parse_date("2023-10-16")});
  OccupancyIndicator ind({1, 100}, cal);
  auto sat = parse_timestamp("2023-10-14T10:00:00Z");
  auto mon_holiday = parse_timestamp("2023-10-16T10:00:00Z");
  auto tue = parse_timestamp("2023-10-17T10:00:00Z");

  auto first = ind.observe(1, sat, 5);
  CHECK(first.result.level == OccupancyLevel::Unknown);
  CHECK(first.result.history_size == 0);
  CHECK(first.bucket.day_class == DayClass::WeekendOrHoliday);

  // Holiday Monday shares the Saturday bucket.
  auto second = ind.observe(1, mon_holiday + seconds{5}, 5);
  CHECK(second.result.history_size == 1);
  CHECK(second.result.level == OccupancyLevel::Low);  // 5 <= p25 of {5}

  auto weekday = ind.peek(1, tue, 5);
  CHECK(weekday.bucket.day_class == DayClass::Weekday);
  CHECK(weekday.result.level == OccupancyLevel::Unknown);
  CHECK(ind.history().find(weekday.bucket) == nullptr);
}

TEST_CASE("replay matches a hand-rolled per-bucket loop") {
  std::mt19937_64 rng(31);
  auto t0 = parse_timestamp("2023-10-13T22:00:00Z");  // Friday night into Saturday
  auto recs = oracle::random_records(rng, 30000, t0, 4 * 3600, 2, 60);
  RecordStore store;
  store.append(recs);
  auto snap = store.snapshot();
  HolidayCalendar cal;
  OccupancyIndicator ind({20, 500}, cal);
  auto readings = replay_occupancy(*snap, 1, t0, t0 + hours{4}, ind);
  REQUIRE(readings.size() == 4 * 720);

  std::map<BucketKey, std::deque<Count>> hist;
  std::set<CameraId> cam{1};
  for (const auto& r : readings) {
    auto expected_count =
        static_cast<Count>(oracle::distinct_humans(recs, &cam, r.window_start, r.window_start + seconds{5}));
    REQUIRE(r.count == expected_count);
    auto& h = hist[r.bucket];
    std::vector<Count> v(h.begin(), h.end());
    if (v.size() < 20) {
      REQUIRE(r.result.level == OccupancyLevel::Unknown);
    } else {
      auto p25 = oracle::sorted_percentile(v, 25), p75 = oracle::sorted_percentile(v, 75);
      auto want = r.count <= p25 ? OccupancyLevel::Low : r.count <= p75 ? OccupancyLevel::Normal : OccupancyLevel::High;
      REQUIRE(r.result.level == want);
    }
    h.push_back(r.count);
    if (h.size() > 500) h.pop_front();
  }
  CHECK(hist.size() == 4);
}
