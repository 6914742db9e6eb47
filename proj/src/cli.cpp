#include "svaa/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svaa/config.hpp"
#include "svaa/error.hpp"

namespace svaa::cli {
namespace {

using json = nlohmann::json;

std::string num(double v) {
  char buf[32];
  int n = std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::string(buf, n);
}

Micros seconds_to_micros(double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "duration must be positive");
  return Micros{static_cast<std::int64_t>(std::llround(s * 1e6))};
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
}

json bucket_json(const BucketKey& key) {
  return {{"camera_id", key.camera_id},
          {"hour_of_day", key.hour_of_day},
          {"day_class", std::string(to_string(key.day_class))}};
}

json occupancy_json(const OccupancyReading& r) {
  json j;
  j["window_start"] = format_timestamp(r.window_start);
  j["count"] = r.count;
  j["level"] = std::string(to_string(r.result.level));
  j["p25"] = r.result.p25 ? json(*r.result.p25) : json(nullptr);
  j["p75"] = r.result.p75 ? json(*r.result.p75) : json(nullptr);
  j["bucket"] = bucket_json(r.bucket);
  j["history_size"] = r.result.history_size;
  return j;
}

// Options shared by every subcommand.
struct Globals {
  std::string config_path;
  std::string store_path;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  AppConfig config() const {
    AppConfig cfg = globals.config_path.empty() ? default_config() : load_config(globals.config_path);
    if (!globals.store_path.empty()) cfg.store_path = globals.store_path;
    return cfg;
  }

  // Analytics need an existing store; ingest may create one.
  std::shared_ptr<const StoreSnapshot> open_store(const AppConfig& cfg) const {
    if (!std::filesystem::is_directory(cfg.store_path)) {
      throw Error(ErrorCode::StoreMissing, "store " + cfg.store_path.string() + " does not exist");
    }
    return RecordStore::open(cfg.store_path).snapshot();
  }

  Group group(const std::optional<CameraId>& camera, const std::string& location) const {
    if (camera && !location.empty()) throw Error(ErrorCode::InvalidArgument, "give --camera or --location, not both");
    if (camera) return Group::of_camera(*camera);
    if (!location.empty()) return Group::of_location(location);
    return Group::all();
  }

  Timestamp store_start(const StoreSnapshot& store) const {
    auto t = store.first_time();
    return t ? align_to_interval(*t) : Timestamp{};
  }

  Timestamp store_end(const StoreSnapshot& store) const {
    auto t = store.last_time();
    return t ? align_to_interval(*t) + kIntervalLength : Timestamp{};
  }

  Globals globals;

  int ingest(const std::string& input) {
    AppConfig cfg = config();
    RecordStore store = RecordStore::open(cfg.store_path);
    auto log = [&](const Rejection& r) { err_ << "line " << r.line_number << ": " << r.reason << "\n"; };
    IngestReport report;
    if (input.empty() || input == "-") {
      report = store.ingest(std::cin, log);
    } else {
      std::ifstream in(input);
      if (!in) throw Error(ErrorCode::IoError, "cannot read " + input);
      report = store.ingest(in, log);
    }
    out_ << "accepted=" << report.accepted << " rejected=" << report.rejected;
    if (report.first_time) out_ << " first=" << format_timestamp(*report.first_time);
    if (report.last_time) out_ << " last=" << format_timestamp(*report.last_time);
    out_ << "\n";
    return kExitOk;
  }

  int current(const std::string& at, std::optional<double> staleness) {
    AppConfig cfg = config();
    Timestamp now = parse_timestamp(at);
    Micros window = staleness ? seconds_to_micros(*staleness) : cfg.staleness;
    auto store = open_store(cfg);
    out_ << current_count(*store, now, window) << "\n";
    return kExitOk;
  }

  int hourly(std::optional<CameraId> camera, const std::string& location, const std::string& from,
             const std::string& to) {
    AppConfig cfg = config();
    if (!camera && location.empty()) throw Error(ErrorCode::InvalidArgument, "hourly needs --camera or --location");
    auto g = group(camera, location);
    Timestamp t0 = parse_timestamp(from), t1 = parse_timestamp(to);
    auto store = open_store(cfg);
    auto profile = hourly_average(*store, g, cfg.locations(), t0, t1);
    out_ << "hour,mean,samples\n";
    for (int h = 0; h < 24; ++h) {
      if (const auto& cell = profile.hours[static_cast<std::size_t>(h)]) {
        out_ << h << "," << num(cell->mean) << "," << cell->samples << "\n";
      }
    }
    return kExitOk;
  }

  int total(const std::string& from, const std::string& to, double bucket) {
    AppConfig cfg = config();
    Timestamp t0 = parse_timestamp(from), t1 = parse_timestamp(to);
    Micros step = seconds_to_micros(bucket);
    auto store = open_store(cfg);
    auto series = total_over_time(*store, t0, t1, step);
    out_ << "bucket_start,cumulative\n";
    for (const auto& p : series) out_ << format_timestamp(p.bucket_start) << "," << p.cumulative << "\n";
    return kExitOk;
  }

  int peaks(std::optional<CameraId> camera, const std::string& location, const std::string& from,
            const std::string& to, std::size_t k) {
    AppConfig cfg = config();
    auto g = group(camera, location);
    Timestamp t0 = parse_timestamp(from), t1 = parse_timestamp(to);
    auto store = open_store(cfg);
    auto ranked = peak_hours(*store, g, cfg.locations(), t0, t1, k);
    out_ << "hour,mean\n";
    for (const auto& r : ranked) out_ << r.hour << "," << num(r.mean) << "\n";
    return kExitOk;
  }

  int occupancy(CameraId camera, const std::string& at, bool live, const std::string& from, const std::string& to) {
    AppConfig cfg = config();
    cfg.camera(camera);
    if (live == !at.empty()) throw Error(ErrorCode::InvalidArgument, "occupancy needs exactly one of --at or --live");
    std::optional<Timestamp> target;
    if (!at.empty()) target = parse_timestamp(at);
    auto store = open_store(cfg);
    OccupancyIndicator indicator(cfg.occupancy, cfg.holidays);
    Timestamp t0 = from.empty() ? store_start(*store) : align_to_interval(parse_timestamp(from));

    if (live) {
      Timestamp t1 = to.empty() ? store_end(*store) : parse_timestamp(to);
      for (const auto& r : replay_occupancy(*store, camera, t0, std::max(t0, t1), indicator)) {
        out_ << occupancy_json(r).dump() << "\n";
      }
      return kExitOk;
    }

    Timestamp window = align_to_interval(*target);
    if (window > t0) replay_occupancy(*store, camera, t0, window, indicator);
    auto counts = store->interval_counts(camera, window, window + kIntervalLength);
    auto reading = indicator.peek(camera, window, static_cast<Count>(counts.front().count));
    out_ << occupancy_json(reading).dump() << "\n";
    return kExitOk;
  }

  int anomaly(CameraId camera, const std::string& replay) {
    AppConfig cfg = config();
    cfg.camera(camera);
    auto sep = replay.find("..");
    if (sep == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--replay expects T0..T1");
    Timestamp t0 = parse_timestamp(replay.substr(0, sep));
    Timestamp t1 = parse_timestamp(replay.substr(sep + 2));
    auto store = open_store(cfg);
    AnomalyDetector detector(cfg.anomaly, cfg.holidays);
    out_ << "window_start,count,mean,std,z,is_anomaly\n";
    for (const auto& r : replay_anomaly(*store, camera, t0, t1, detector)) {
      out_ << format_timestamp(r.window_start) << "," << r.count << "," << num(r.verdict.mean) << ","
           << num(r.verdict.std) << "," << num(r.verdict.z_score) << "," << (r.verdict.is_anomaly ? "true" : "false")
           << "\n";
    }
    return kExitOk;
  }

  int bev(CameraId camera, const std::string& window) {
    AppConfig cfg = config();
    const auto& cam = cfg.camera(camera);
    Timestamp w = parse_timestamp(window);
    auto store = open_store(cfg);
    out_ << "global_id,bev_x,bev_y\n";
    for (const auto& p : window_bev(*store, camera, cam, w)) {
      out_ << p.global_id << "," << num(p.x) << "," << num(p.y) << "\n";
    }
    return kExitOk;
  }

  int heatmap(CameraId camera, const std::string& date, std::optional<double> sigma, const std::string& mode,
              const std::string& out_path, const std::string& csv_path, bool no_smooth, std::optional<double> gamma) {
    AppConfig cfg = config();
    const auto& cam = cfg.camera(camera);
    HeatmapOptions options = cfg.heatmap;
    if (sigma) options.smoothing.sigma = *sigma;
    if (!mode.empty()) options.mode = mode == "extent" ? GridMode::DataExtent : GridMode::FixedBounds;
    options.smooth = !no_smooth;
    auto day = parse_date(date);
    auto store = open_store(cfg);
    auto grid = daily_heatmap(*store, cam, day, options);
    write_file(out_path, render_pgm(grid, gamma.value_or(cfg.gamma)));
    if (!csv_path.empty()) write_file(csv_path, render_csv(grid));
    out_ << "camera=" << camera << " date=" << date << " cols=" << grid.geometry.n_cols
         << " rows=" << grid.geometry.n_rows << " mass=" << num(grid.total_mass())
         << " peak=" << num(peak_intensity(grid)) << "\n";
    return kExitOk;
  }

  int simulate(const std::string& profile_path, std::optional<std::uint64_t> seed, const std::string& from,
               const std::string& to, const std::string& out_path, const std::string& truth_path) {
    SimProfile profile = profile_path.empty() ? default_profile() : load_profile(profile_path);
    if (seed) profile.seed = *seed;
    Timestamp t0 = from.empty() ? default_sim_start() : parse_timestamp(from);
    Timestamp t1 = to.empty() ? default_sim_end() : parse_timestamp(to);
    auto sim = generate(profile, t0, t1);
    {
      std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
      std::string buf;
      for (const auto& r : sim.records) {
        buf += serialize_record(r);
        buf += '\n';
        if (buf.size() > (1u << 20)) {
          out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
          buf.clear();
        }
      }
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      out.flush();
      if (!out) throw Error(ErrorCode::IoError, "cannot write " + out_path);
    }
    if (!truth_path.empty()) write_file(truth_path, sim.truth.to_csv());
    out_ << "records=" << sim.records.size() << " persons=" << sim.truth.persons << "\n";
    return kExitOk;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Runner runner(out, err);
  CLI::App app{"Analytics over multi-camera person detection records", "svaa"};
  app.require_subcommand(1);
  app.add_option("--config", runner.globals.config_path, "JSON configuration file");
  app.add_option("--store", runner.globals.store_path, "Store directory (overrides the config)");

  std::function<int()> action;

  auto* ingest = app.add_subcommand("ingest", "Append newline-delimited records to the store");
  std::string input;
  ingest->add_option("--input", input, "Input file, '-' for stdin (default)");
  ingest->callback([&] { action = [&] { return runner.ingest(input); }; });

  auto* current = app.add_subcommand("current", "Distinct people seen across all cameras just before --at");
  std::string at;
  std::optional<double> staleness;
  current->add_option("--at", at, "RFC 3339 UTC timestamp")->required();
  current->add_option("--staleness", staleness, "Look-back window in seconds");
  current->callback([&] { action = [&] { return runner.current(at, staleness); }; });

  std::optional<CameraId> camera;
  std::string location, from, to;

  auto* hourly = app.add_subcommand("hourly", "Hourly average of distinct people (CSV hour,mean,samples)");
  hourly->add_option("--camera", camera);
  hourly->add_option("--location", location);
  hourly->add_option("--from", from)->required();
  hourly->add_option("--to", to)->required();
  hourly->callback([&] { action = [&] { return runner.hourly(camera, location, from, to); }; });

  auto* total = app.add_subcommand("total", "Cumulative distinct people over time");
  double bucket = 3600.0;
  total->add_option("--from", from)->required();
  total->add_option("--to", to)->required();
  total->add_option("--bucket", bucket, "Bucket length in seconds");
  total->callback([&] { action = [&] { return runner.total(from, to, bucket); }; });

  auto* peaks = app.add_subcommand("peaks", "Top-k hours by mean distinct people");
  std::size_t k = 3;
  peaks->add_option("--camera", camera);
  peaks->add_option("--location", location);
  peaks->add_option("--from", from)->required();
  peaks->add_option("--to", to)->required();
  peaks->add_option("--k", k)->check(CLI::PositiveNumber);
  peaks->callback([&] { action = [&] { return runner.peaks(camera, location, from, to, k); }; });

  auto* occupancy = app.add_subcommand("occupancy", "Occupancy level against historical percentiles");
  CameraId cam_id = 0;
  bool live = false;
  occupancy->add_option("--camera", cam_id)->required();
  occupancy->add_option("--at", at, "Classify the 5-second window containing this time");
  occupancy->add_flag("--live", live, "Replay the store, one line per 5-second window");
  occupancy->add_option("--from", from, "History start (default: first record)");
  occupancy->add_option("--to", to, "Replay end for --live (default: last record)");
  occupancy->callback([&] { action = [&] { return runner.occupancy(cam_id, at, live, from, to); }; });

  auto* anomaly = app.add_subcommand("anomaly", "Replay 5-second counts through the anomaly detector");
  std::string replay;
  anomaly->add_option("--camera", cam_id)->required();
  anomaly->add_option("--replay", replay, "T0..T1")->required();
  anomaly->callback([&] { action = [&] { return runner.anomaly(cam_id, replay); }; });

  auto* bev = app.add_subcommand("bev", "Bird's-eye coordinates of one 5-second window (CSV)");
  std::string window;
  bev->add_option("--camera", cam_id)->required();
  bev->add_option("--window", window)->required();
  bev->callback([&] { action = [&] { return runner.bev(cam_id, window); }; });

  auto* heatmap = app.add_subcommand("heatmap", "Daily heatmap of one camera as PGM (and optional CSV)");
  std::string date, mode, out_path, csv_path;
  std::optional<double> sigma, gamma;
  bool no_smooth = false;
  heatmap->add_option("--camera", cam_id)->required();
  heatmap->add_option("--date", date, "YYYY-MM-DD (UTC)")->required();
  heatmap->add_option("--sigma", sigma, "Gaussian sigma in cells");
  heatmap->add_option("--mode", mode)->check(CLI::IsMember({"fixed", "extent"}));
  heatmap->add_option("--out", out_path, "PGM output path")->required();
  heatmap->add_option("--csv", csv_path, "Also write cell values as CSV");
  heatmap->add_option("--gamma", gamma);
  heatmap->add_flag("--no-smooth", no_smooth, "Skip Gaussian smoothing");
  heatmap->callback([&] {
    action = [&] { return runner.heatmap(cam_id, date, sigma, mode, out_path, csv_path, no_smooth, gamma); };
  });

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic record stream");
  std::string profile_path, truth_path;
  std::optional<std::uint64_t> seed;
  simulate->add_option("--profile", profile_path, "JSON profile (default: built-in 8-camera profile)");
  simulate->add_option("--seed", seed);
  simulate->add_option("--from", from);
  simulate->add_option("--to", to);
  simulate->add_option("--out", out_path)->required();
  simulate->add_option("--truth", truth_path, "Ground-truth CSV path");
  simulate->callback([&] {
    action = [&] { return runner.simulate(profile_path, seed, from, to, out_path, truth_path); };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    bool usage = e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::InvalidTimestamp;
    return usage ? kExitUsage : kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
}

}  // namespace svaa::cli
