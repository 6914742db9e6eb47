#include "svaa/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "svaa/error.hpp"

namespace svaa {
namespace {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path, ErrorCode code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(code, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, ErrorCode code) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) throw Error(code, "expected a JSON object");
  return doc;
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : it->get<T>();
}

GridMode parse_mode(const std::string& s) {
  if (s == "fixed") return GridMode::FixedBounds;
  if (s == "extent") return GridMode::DataExtent;
  throw Error(ErrorCode::InvalidConfig, "heatmap mode must be 'fixed' or 'extent'");
}

std::set<std::chrono::sys_days> parse_dates(const json& arr, ErrorCode code) {
  std::set<std::chrono::sys_days> out;
  if (!arr.is_array()) throw Error(code, "holidays must be an array of YYYY-MM-DD strings");
  for (const auto& d : arr) {
    try {
      out.insert(parse_date(d.get<std::string>()));
    } catch (const Error&) {
      throw Error(code, "bad holiday date " + d.dump());
    }
  }
  return out;
}

json dates_json(const std::set<std::chrono::sys_days>& days) {
  json arr = json::array();
  for (auto d : days) arr.push_back(format_date(d));
  return arr;
}

}  // namespace

void AppConfig::validate() const {
  std::set<CameraId> ids;
  for (const auto& c : cameras) {
    c.validate();
    if (!ids.insert(c.camera_id).second) {
      throw Error(ErrorCode::InvalidConfig, "camera " + std::to_string(c.camera_id) + " configured twice");
    }
    if (c.location.empty()) {
      throw Error(ErrorCode::InvalidConfig, "camera " + std::to_string(c.camera_id) + " has no location");
    }
  }
  if (occupancy.capacity == 0) throw Error(ErrorCode::InvalidConfig, "occupancy capacity must be positive");
  if (staleness <= Micros::zero()) throw Error(ErrorCode::InvalidConfig, "staleness must be positive");
  if (!(heatmap.smoothing.sigma > 0.0)) throw Error(ErrorCode::InvalidConfig, "sigma must be positive");
  if (!(heatmap.cell_size > 0.0)) throw Error(ErrorCode::InvalidConfig, "cell_size must be positive");
  if (heatmap.n_cols == 0 || heatmap.n_rows == 0) throw Error(ErrorCode::InvalidConfig, "grid must be nonempty");
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidConfig, "gamma must be positive");
}

LocationMap AppConfig::locations() const {
  LocationMap map;
  for (const auto& c : cameras) map.set(c.camera_id, c.location);
  return map;
}

const CameraConfig& AppConfig::camera(CameraId id) const {
  for (const auto& c : cameras) {
    if (c.camera_id == id) return c;
  }
  throw Error(ErrorCode::UnknownCamera, "camera " + std::to_string(id) + " is not configured");
}

AppConfig parse_config(const std::string& text) {
  json doc = parse_json(text, ErrorCode::InvalidConfig);
  AppConfig cfg;
  try {
    if (auto it = doc.find("store"); it != doc.end()) cfg.store_path = it->get<std::string>();
    const json& cams = doc.at("cameras");
    for (const auto& c : cams) {
      CameraConfig cam;
      cam.camera_id = c.at("camera_id").get<CameraId>();
      cam.width = c.at("width").get<int>();
      cam.height = c.at("height").get<int>();
      cam.min_teta = c.at("min_teta").get<double>();
      cam.max_teta = c.at("max_teta").get<double>();
      cam.location = c.at("location").get<std::string>();
      cfg.cameras.push_back(cam);
    }
    if (auto it = doc.find("holidays"); it != doc.end()) {
      cfg.holidays = HolidayCalendar(parse_dates(*it, ErrorCode::InvalidConfig));
    }
    if (auto it = doc.find("occupancy"); it != doc.end()) {
      cfg.occupancy.min_samples = get_or<std::size_t>(*it, "min_samples", cfg.occupancy.min_samples);
      cfg.occupancy.capacity = get_or<std::size_t>(*it, "capacity", cfg.occupancy.capacity);
    }
    if (auto it = doc.find("anomaly"); it != doc.end()) {
      cfg.anomaly.min_samples = get_or<std::size_t>(*it, "min_samples", cfg.anomaly.min_samples);
    }
    if (auto it = doc.find("heatmap"); it != doc.end()) {
      cfg.heatmap.mode = parse_mode(get_or<std::string>(*it, "mode", "fixed"));
      cfg.heatmap.n_cols = get_or<std::size_t>(*it, "cols", cfg.heatmap.n_cols);
      cfg.heatmap.n_rows = get_or<std::size_t>(*it, "rows", cfg.heatmap.n_rows);
      cfg.heatmap.cell_size = get_or<double>(*it, "cell_size", cfg.heatmap.cell_size);
      cfg.heatmap.smoothing.sigma = get_or<double>(*it, "sigma", cfg.heatmap.smoothing.sigma);
      cfg.gamma = get_or<double>(*it, "gamma", cfg.gamma);
    }
    if (auto it = doc.find("staleness_seconds"); it != doc.end()) {
      cfg.staleness = Micros{static_cast<std::int64_t>(it->get<double>() * 1e6)};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  cfg.validate();
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path, ErrorCode::InvalidConfig));
}

std::string dump_config(const AppConfig& cfg) {
  json doc;
  doc["store"] = cfg.store_path.string();
  doc["cameras"] = json::array();
  for (const auto& c : cfg.cameras) {
    doc["cameras"].push_back({{"camera_id", c.camera_id},
                              {"width", c.width},
                              {"height", c.height},
                              {"min_teta", c.min_teta},
                              {"max_teta", c.max_teta},
                              {"location", c.location}});
  }
  doc["holidays"] = dates_json(cfg.holidays.holidays());
  doc["occupancy"] = {{"min_samples", cfg.occupancy.min_samples}, {"capacity", cfg.occupancy.capacity}};
  doc["anomaly"] = {{"min_samples", cfg.anomaly.min_samples}};
  doc["heatmap"] = {{"mode", cfg.heatmap.mode == GridMode::FixedBounds ? "fixed" : "extent"},
                    {"cols", cfg.heatmap.n_cols},
                    {"rows", cfg.heatmap.n_rows},
                    {"cell_size", cfg.heatmap.cell_size},
                    {"sigma", cfg.heatmap.smoothing.sigma},
                    {"gamma", cfg.gamma}};
  doc["staleness_seconds"] = std::chrono::duration<double>(cfg.staleness).count();
  return doc.dump(2) + "\n";
}

AppConfig default_config() {
  AppConfig cfg;
  auto profile = default_profile();
  cfg.holidays = HolidayCalendar(profile.holidays);
  for (const auto& p : profile.cameras) {
    std::string location = p.camera_id <= 3 ? "building-A" : p.camera_id <= 6 ? "building-B" : "parking-lot";
    cfg.cameras.push_back({p.camera_id, p.width, p.height, 40.0, 80.0, location});
  }
  return cfg;
}

SimProfile parse_profile(const std::string& text) {
  json doc = parse_json(text, ErrorCode::InvalidProfile);
  SimProfile p;
  try {
    p.seed = get_or<std::uint64_t>(doc, "seed", p.seed);
    if (auto it = doc.find("holidays"); it != doc.end()) p.holidays = parse_dates(*it, ErrorCode::InvalidProfile);
    for (const auto& c : doc.at("cameras")) {
      CameraProfile cam;
      cam.camera_id = c.at("camera_id").get<CameraId>();
      cam.width = get_or<int>(c, "width", cam.width);
      cam.height = get_or<int>(c, "height", cam.height);
      const json& rate = c.at("hourly_rate");
      if (rate.is_number()) {
        cam.hourly_rate.fill(rate.get<double>());
      } else if (rate.is_array() && rate.size() == 24) {
        for (std::size_t h = 0; h < 24; ++h) cam.hourly_rate[h] = rate[h].get<double>();
      } else {
        throw Error(ErrorCode::InvalidProfile, "hourly_rate must be a number or 24 numbers");
      }
      cam.weekend_multiplier = get_or<double>(c, "weekend_multiplier", cam.weekend_multiplier);
      if (auto it = c.find("duration"); it != c.end()) {
        cam.duration_min = it->at(0).get<double>();
        cam.duration_max = it->at(1).get<double>();
      }
      if (auto it = c.find("bbox_height"); it != c.end()) {
        cam.height_min = it->at(0).get<double>();
        cam.height_max = it->at(1).get<double>();
      }
      cam.emission_period = get_or<int>(c, "emission_period", cam.emission_period);
      cam.other_class_rate = get_or<double>(c, "other_class_rate", cam.other_class_rate);
      p.cameras.push_back(cam);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidProfile, e.what());
  }
  p.validate();
  return p;
}

SimProfile load_profile(const std::filesystem::path& path) {
  return parse_profile(read_file(path, ErrorCode::InvalidProfile));
}

std::string dump_profile(const SimProfile& p) {
  json doc;
  doc["seed"] = p.seed;
  doc["holidays"] = dates_json(p.holidays);
  doc["cameras"] = json::array();
  for (const auto& c : p.cameras) {
    doc["cameras"].push_back({{"camera_id", c.camera_id},
                              {"width", c.width},
                              {"height", c.height},
                              {"hourly_rate", c.hourly_rate},
                              {"weekend_multiplier", c.weekend_multiplier},
                              {"duration", {c.duration_min, c.duration_max}},
                              {"bbox_height", {c.height_min, c.height_max}},
                              {"emission_period", c.emission_period},
                              {"other_class_rate", c.other_class_rate}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace svaa
