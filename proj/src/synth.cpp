#include "svaa/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "svaa/error.hpp"

namespace svaa {
namespace {

using namespace std::chrono;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// std::mt19937_64's sequence is fixed by the standard; the distributions in
// <random> are not, so the variates below are derived by hand.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

struct Track {
  std::int64_t start_s = 0;
  std::uint32_t class_id = kHumanClass;
};

void push_tracks(Stream& rng, std::vector<Track>& out, std::int64_t t0, std::int64_t t1,
                 const std::function<double(std::int64_t)>& rate_per_hour, std::uint32_t class_id) {
  // Piecewise-constant rate on UTC hours; the exponential gap is redrawn at
  // each boundary, which is exact by memorylessness.
  for (std::int64_t seg = t0; seg < t1;) {
    std::int64_t seg_end = std::min(t1, (seg / 3600 + 1) * 3600);
    double rate = rate_per_hour(seg) / 3600.0;
    if (rate > 0.0) {
      double t = static_cast<double>(seg);
      while (true) {
        t += rng.exponential(rate);
        if (t >= static_cast<double>(seg_end)) break;
        out.push_back({static_cast<std::int64_t>(std::floor(t)), class_id});
      }
    }
    seg = seg_end;
  }
}

bool earlier(const DetectionRecord& a, const DetectionRecord& b) {
  if (a.record_time != b.record_time) return a.record_time < b.record_time;
  if (a.camera_id != b.camera_id) return a.camera_id < b.camera_id;
  return a.global_id < b.global_id;
}

}  // namespace

void SimProfile::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidProfile, why); };
  if (cameras.empty()) fail("profile has no cameras");
  std::set<CameraId> ids;
  for (const auto& c : cameras) {
    std::string who = "camera " + std::to_string(c.camera_id);
    if (c.camera_id == 0) fail("camera_id must be positive");
    if (!ids.insert(c.camera_id).second) fail(who + " listed twice");
    if (c.width <= 0 || c.height <= 0) fail(who + ": resolution must be positive");
    for (double r : c.hourly_rate) {
      if (!(r >= 0.0) || !std::isfinite(r)) fail(who + ": hourly rates must be finite and nonnegative");
    }
    if (!(c.weekend_multiplier >= 0.0 && c.weekend_multiplier <= 1.0)) fail(who + ": weekend multiplier outside [0,1]");
    if (!(c.duration_min > 0.0 && c.duration_min <= c.duration_max)) fail(who + ": need 0 < duration_min <= duration_max");
    if (!(c.height_min > 0.0 && c.height_min <= c.height_max && c.height_max <= 1.0)) {
      fail(who + ": need 0 < height_min <= height_max <= 1");
    }
    if (c.emission_period <= 0) fail(who + ": emission period must be positive");
    if (!(c.other_class_rate >= 0.0)) fail(who + ": other_class_rate must be nonnegative");
  }
}

std::string GroundTruth::to_csv() const {
  std::string out = "date,hour,camera_id,distinct\n";
  for (const auto& [key, n] : distinct) {
    out += format_date(key.date) + "," + std::to_string(key.hour) + "," + std::to_string(key.camera_id) + "," +
           std::to_string(n) + "\n";
  }
  return out;
}

SimulationResult generate(const SimProfile& profile, Timestamp t0, Timestamp t1) {
  profile.validate();
  if (!(t0 < t1)) throw Error(ErrorCode::InvertedRange, "simulation needs t0 < t1");

  HolidayCalendar calendar(profile.holidays);
  // Work on whole seconds so emitted timestamps stay compact.
  std::int64_t begin = ceil<seconds>(t0).time_since_epoch().count();
  std::int64_t end = ceil<seconds>(t1).time_since_epoch().count();

  SimulationResult result;
  GlobalId next_global = 1;
  std::vector<CameraProfile> cameras = profile.cameras;
  std::sort(cameras.begin(), cameras.end(), [](const auto& a, const auto& b) { return a.camera_id < b.camera_id; });

  for (const auto& cam : cameras) {
    Stream rng(splitmix64(profile.seed ^ splitmix64(cam.camera_id)));
    std::vector<Track> tracks;
    auto human_rate = [&](std::int64_t s) {
      Timestamp ts{seconds{s}};
      double r = cam.hourly_rate[static_cast<std::size_t>(hour_of_day(ts))];
      if (calendar.classify(date_of(ts)) == DayClass::WeekendOrHoliday) r *= cam.weekend_multiplier;
      return r;
    };
    push_tracks(rng, tracks, begin, end, human_rate, kHumanClass);
    if (cam.other_class_rate > 0.0) {
      push_tracks(rng, tracks, begin, end, [&](std::int64_t) { return cam.other_class_rate; }, 2);
    }
    std::stable_sort(tracks.begin(), tracks.end(), [](const Track& a, const Track& b) { return a.start_s < b.start_s; });

    std::uint64_t next_local = 1;
    for (const auto& track : tracks) {
      double duration = rng.uniform(cam.duration_min, cam.duration_max);
      double h = std::max(1.0, std::round(rng.uniform(cam.height_min, cam.height_max) * cam.height));
      h = std::min(h, static_cast<double>(cam.height));
      double w = std::clamp(std::round(h * 0.4), 1.0, static_cast<double>(cam.width));
      double y = std::round(rng.uniform(0.0, cam.height - h));
      double x_from = rng.uniform(0.0, cam.width - w);
      double x_to = rng.uniform(0.0, cam.width - w);

      GlobalId gid = next_global++;
      std::uint64_t lid = next_local++;
      bool human = track.class_id == kHumanClass;
      if (human) ++result.truth.persons;
      TruthKey last{};
      bool have_last = false;
      for (std::int64_t k = 0;; ++k) {
        double offset = static_cast<double>(k * cam.emission_period);
        std::int64_t at = track.start_s + k * cam.emission_period;
        if (offset >= duration || at >= end) break;
        double f = duration > 0.0 ? offset / duration : 0.0;
        double x = std::round(x_from + f * (x_to - x_from));

        DetectionRecord rec;
        rec.record_time = Timestamp{seconds{at}};
        rec.camera_id = cam.camera_id;
        rec.class_id = track.class_id;
        rec.bbox = {x, y, w, h};
        rec.local_id = lid;
        rec.global_id = gid;

        if (human) {
          TruthKey key{date_of(rec.record_time), hour_of_day(rec.record_time), cam.camera_id};
          if (!have_last || key != last) {
            ++result.truth.distinct[key];
            last = key;
            have_last = true;
          }
        }
        result.records.push_back(std::move(rec));
      }
    }
  }
  std::sort(result.records.begin(), result.records.end(), earlier);
  return result;
}

SimProfile default_profile(std::uint64_t seed) {
  SimProfile p;
  p.seed = seed;
  p.holidays = {sys_days{2023y / October / 16}, sys_days{2023y / October / 17}};
  const double scales[8] = {1.0, 0.8, 1.2, 0.6, 0.9, 1.1, 0.7, 1.3};
  for (CameraId id = 1; id <= 8; ++id) {
    CameraProfile c;
    c.camera_id = id;
    double peak = 200.0 * scales[id - 1];
    for (int h = 0; h < 24; ++h) {
      double r = 2.0;
      if (h >= 7 && h <= 21) r += peak * std::exp(-std::pow((h - 12) / 3.0, 2.0));
      c.hourly_rate[static_cast<std::size_t>(h)] = r;
    }
    c.weekend_multiplier = 0.25;
    c.duration_min = 10.0;
    c.duration_max = 50.0;
    c.height_min = 0.08;
    c.height_max = 0.5;
    c.emission_period = 1;
    c.other_class_rate = id >= 7 ? 20.0 : 0.0;
    p.cameras.push_back(c);
  }
  return p;
}

Timestamp default_sim_start() { return Timestamp{sys_days{2023y / October / 12}}; }
Timestamp default_sim_end() { return Timestamp{sys_days{2023y / October / 20}}; }

}  // namespace svaa
