#include <doctest.h>

#include <random>

#include "svaa/error.hpp"
#include "svaa/record.hpp"
#include "svaa/time.hpp"

using namespace svaa;
using namespace std::chrono;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected svaa::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("timestamps parse RFC 3339 and normalize offsets") {
  auto t = parse_timestamp("2023-10-01T00:00:00Z");
  CHECK(t == Timestamp{sys_days{2023y / October / 1}});
  CHECK(parse_timestamp("2023-10-01 00:00:00Z") == t);
  CHECK(parse_timestamp("2023-10-01T02:30:00+02:30") == t);
  CHECK(parse_timestamp("2023-09-30T23:00:00-01:00") == t);
  CHECK(parse_timestamp("2023-10-01T00:00:00.25Z") == t + milliseconds{250});
  CHECK(format_timestamp(t + milliseconds{250}) == "2023-10-01T00:00:00.250000Z");
  CHECK(format_timestamp(t) == "2023-10-01T00:00:00Z");

  for (const char* bad : {"not-a-date", "2023-13-01T00:00:00Z", "2023-02-30T00:00:00Z", "2023-10-01T24:00:00Z",
                          "2023-10-01T00:00:00", "2023-10-01T00:00:00.Z", "2023-10-01T00:00:00.1234567Z", ""}) {
    CAPTURE(bad);
    CHECK(code_of([&] { parse_timestamp(bad); }) == ErrorCode::InvalidTimestamp);
  }
}

TEST_CASE("timestamp formatting round-trips") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> us(-2'000'000'000'000'000LL, 4'000'000'000'000'000LL);
  for (int i = 0; i < 2000; ++i) {
    auto t = from_unix_micros(us(rng));
    REQUIRE(parse_timestamp(format_timestamp(t)) == t);
  }
}

TEST_CASE("align_down floors to the epoch grid, also before 1970") {
  auto t = parse_timestamp("2023-10-17T12:17:44.9Z");
  CHECK(align_to_interval(t) == parse_timestamp("2023-10-17T12:17:40Z"));
  CHECK(align_to_interval(parse_timestamp("2023-10-17T12:17:45Z")) == parse_timestamp("2023-10-17T12:17:45Z"));
  CHECK(align_to_interval(parse_timestamp("1969-12-31T23:59:58Z")) == parse_timestamp("1969-12-31T23:59:55Z"));
  CHECK(hour_of_day(t) == 12);
}

TEST_CASE("parse_record reads the documented row") {
  auto r = parse_record(
      R"({"record_time":"2023-10-01T00:00:00Z","camera_id":1,"class_id":0,"bbox":[10,20,50,100],"local_id":1,"global_id":1001})");
  CHECK(r.record_time == parse_timestamp("2023-10-01T00:00:00Z"));
  CHECK(r.camera_id == 1);
  CHECK(r.class_id == 0);
  CHECK(r.bbox == BoundingBox{10, 20, 50, 100});
  CHECK(r.local_id == 1);
  CHECK(r.global_id == 1001);
  CHECK_FALSE(r.feature.has_value());
  CHECK_FALSE(r.batch_id.has_value());
}

TEST_CASE("parse_record keeps feature and batch_id as opaque JSON") {
  std::string line =
      R"({"record_time":"2023-10-01T00:00:00Z","camera_id":3,"class_id":0,"bbox":[1.5,2,3,4],"local_id":2,"global_id":9,"batch_id":"b-17","feature":[0.25,-1,3]})";
  auto r = parse_record(line);
  REQUIRE(r.feature.has_value());
  CHECK(*r.feature == "[0.25,-1,3]");
  CHECK(*r.batch_id == R"("b-17")");
  CHECK(serialize_record(r) == line);
  CHECK(parse_record(serialize_record(r)) == r);
}

TEST_CASE("parse_record error paths") {
  const std::string head = R"({"record_time":"2023-10-01T00:00:00Z","camera_id":1,"class_id":0,)";
  CHECK(code_of([&] { parse_record(head + R"("bbox":[10,20,0,100],"local_id":1,"global_id":1})"); }) ==
        ErrorCode::InvalidBBox);
  CHECK(code_of([&] { parse_record(head + R"("bbox":[10,20,5,-1],"local_id":1,"global_id":1})"); }) ==
        ErrorCode::InvalidBBox);
  CHECK(code_of([&] {
          parse_record(
              R"({"record_time":"not-a-date","camera_id":1,"class_id":0,"bbox":[1,2,3,4],"local_id":1,"global_id":1})");
        }) == ErrorCode::InvalidTimestamp);
  CHECK(code_of([&] { parse_record("{not json"); }) == ErrorCode::MalformedLine);
  CHECK(code_of([&] { parse_record("[1,2,3]"); }) == ErrorCode::MalformedLine);
  CHECK(code_of([&] { parse_record(head + R"("bbox":[1,2,3],"local_id":1,"global_id":1})"); }) ==
        ErrorCode::MalformedLine);
  CHECK(code_of([&] { parse_record(head + R"("bbox":[1,2,3,4],"local_id":1})"); }) == ErrorCode::MalformedLine);
  CHECK(code_of([&] { parse_record(head + R"("bbox":[1,2,3,4],"local_id":1,"global_id":0})"); }) ==
        ErrorCode::MalformedLine);
  CHECK(code_of([&] { parse_record(head + R"("bbox":[1,2,3,4],"local_id":1,"global_id":"7"})"); }) ==
        ErrorCode::MalformedLine);
}

TEST_CASE("serialize/parse is the identity on records") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  std::uniform_int_distribution<std::uint64_t> id(1, 1ULL << 40);
  for (int i = 0; i < 500; ++i) {
    DetectionRecord r;
    r.record_time = from_unix_micros(static_cast<std::int64_t>(id(rng)) * 997);
    r.camera_id = static_cast<CameraId>(id(rng) % 64 + 1);
    r.class_id = static_cast<std::uint32_t>(id(rng) % 3);
    r.bbox = {coord(rng), coord(rng), coord(rng) + 1e-3, i % 2 ? std::round(coord(rng)) + 1 : coord(rng) + 1e-3};
    r.local_id = id(rng);
    r.global_id = id(rng);
    REQUIRE(parse_record(serialize_record(r)) == r);
  }
}
