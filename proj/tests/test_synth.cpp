#include <doctest.h>

#include <map>

#include "oracles.hpp"
#include "svaa/record.hpp"
#include "svaa/synth.hpp"

using namespace svaa;
using namespace std::chrono;

namespace {

SimProfile flat_profile(double rate, std::uint64_t seed) {
  SimProfile p;
  p.seed = seed;
  CameraProfile c;
  c.camera_id = 1;
  c.hourly_rate.fill(rate);
  p.cameras.push_back(c);
  return p;
}

std::uint64_t digest(const SimulationResult& r) {
  std::uint64_t h = oracle::fnv1a("");
  for (const auto& rec : r.records) h = oracle::fnv1a(serialize_record(rec), h);
  return oracle::fnv1a(r.truth.to_csv(), h);
}

const Timestamp kT0 = parse_timestamp("2023-10-18T00:00:00Z");  // a Wednesday

}  // namespace

TEST_CASE("zero rate produces nothing") {
  auto r = generate(flat_profile(0.0, 1), kT0, kT0 + days{1});
  CHECK(r.records.empty());
  CHECK(r.truth.persons == 0);
  CHECK_THROWS_AS(generate(flat_profile(1.0, 1), kT0, kT0), Error);
  auto bad = flat_profile(-1.0, 1);
  CHECK_THROWS_AS(generate(bad, kT0, kT0 + hours{1}), Error);
}

TEST_CASE("output is a pure function of profile and range") {
  auto p = default_profile(9);
  auto a = generate(p, kT0, kT0 + hours{6});
  auto b = generate(p, kT0, kT0 + hours{6});
  CHECK(digest(a) == digest(b));
  CHECK(a.records == b.records);
  auto c = generate(default_profile(10), kT0, kT0 + hours{6});
  CHECK(digest(a) != digest(c));
}

TEST_CASE("arrival counts follow the configured rate") {
  double total = 0;
  const int seeds = 12;
  for (int s = 1; s <= seeds; ++s) total += static_cast<double>(generate(flat_profile(60.0, s), kT0, kT0 + days{1}).truth.persons);
  CHECK(std::abs(total / seeds - 1440.0) <= 0.05 * 1440.0);
}

TEST_CASE("records are valid, sorted, and consistent with ground truth") {
  auto p = default_profile(3);
  auto r = generate(p, kT0 - hours{2}, kT0 + hours{14});
  REQUIRE_FALSE(r.records.empty());
  std::set<GlobalId> humans;
  bool saw_other = false;
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    CHECK_NOTHROW(validate_bbox_in_frame(rec.bbox, 1920, 1080));
    if (i) CHECK_FALSE(rec.record_time < r.records[i - 1].record_time);
    CHECK(parse_record(serialize_record(rec)) == rec);
    if (rec.is_human()) humans.insert(rec.global_id);
    else saw_other = true;
  }
  CHECK(saw_other);
  CHECK(humans.size() == r.truth.persons);
  for (const auto& [key, n] : r.truth.distinct) {
    Timestamp h0 = Timestamp{key.date} + hours{key.hour};
    std::set<CameraId> cam{key.camera_id};
    REQUIRE(n == oracle::distinct_humans(r.records, &cam, h0, h0 + hours{1}));
  }
}

TEST_CASE("weekend and holiday arrivals are scaled down") {
  auto p = flat_profile(100.0, 4);
  p.cameras[0].weekend_multiplier = 0.25;
  p.holidays = {parse_date("2023-10-18")};
  auto weekday = generate(p, parse_timestamp("2023-10-19T00:00:00Z"), parse_timestamp("2023-10-20T00:00:00Z"));
  auto holiday = generate(p, kT0, kT0 + days{1});
  auto saturday = generate(p, parse_timestamp("2023-10-21T00:00:00Z"), parse_timestamp("2023-10-22T00:00:00Z"));
  CHECK(weekday.truth.persons == doctest::Approx(2400).epsilon(0.1));
  CHECK(holiday.truth.persons == doctest::Approx(600).epsilon(0.2));
  CHECK(saturday.truth.persons == doctest::Approx(600).epsilon(0.2));
}

TEST_CASE("profile validation") {
  auto p = flat_profile(1.0, 1);
  p.cameras.push_back(p.cameras[0]);
  CHECK_THROWS_AS(p.validate(), Error);
  p = flat_profile(1.0, 1);
  p.cameras[0].weekend_multiplier = 2.0;
  CHECK_THROWS_AS(p.validate(), Error);
  SimProfile none;
  CHECK_THROWS_AS(none.validate(), Error);
}
