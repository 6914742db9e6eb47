#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "svaa/anomaly.hpp"
#include "svaa/birdseye.hpp"
#include "svaa/config.hpp"
#include "svaa/heatmap.hpp"
#include "svaa/metrics.hpp"
#include "svaa/occupancy.hpp"
#include "svaa/synth.hpp"

namespace py = pybind11;
using namespace svaa;

namespace {

// Timestamps cross the boundary as RFC 3339 strings.
Timestamp ts(const std::string& s) { return parse_timestamp(s); }

py::dict record_dict(const DetectionRecord& r) {
  py::dict d;
  d["record_time"] = format_timestamp(r.record_time);
  d["camera_id"] = r.camera_id;
  d["class_id"] = r.class_id;
  d["bbox"] = py::make_tuple(r.bbox.x, r.bbox.y, r.bbox.w, r.bbox.h);
  d["local_id"] = r.local_id;
  d["global_id"] = r.global_id;
  return d;
}

py::dict report_dict(const IngestReport& r) {
  py::dict d;
  d["accepted"] = r.accepted;
  d["rejected"] = r.rejected;
  d["first_time"] = r.first_time ? py::object(py::str(format_timestamp(*r.first_time))) : py::object(py::none());
  d["last_time"] = r.last_time ? py::object(py::str(format_timestamp(*r.last_time))) : py::object(py::none());
  py::list rej;
  for (const auto& x : r.rejections) rej.append(py::make_tuple(x.line_number, std::string(to_string(x.code)), x.reason));
  d["rejections"] = rej;
  return d;
}

Group to_group(std::optional<CameraId> camera, std::optional<std::string> location) {
  if (camera && location) throw Error(ErrorCode::InvalidArgument, "give camera or location, not both");
  if (camera) return Group::of_camera(*camera);
  if (location) return Group::of_location(*location);
  return Group::all();
}

LocationMap to_locations(const std::map<CameraId, std::string>& m) { return LocationMap(m); }

std::vector<std::vector<double>> rows_of(const HeatGrid& g) {
  std::vector<std::vector<double>> out(g.geometry.n_rows);
  for (std::size_t r = 0; r < g.geometry.n_rows; ++r) {
    out[r].assign(g.cells.begin() + static_cast<std::ptrdiff_t>(r * g.geometry.n_cols),
                  g.cells.begin() + static_cast<std::ptrdiff_t>((r + 1) * g.geometry.n_cols));
  }
  return out;
}

HeatGrid grid_of(const std::vector<std::vector<double>>& rows) {
  HeatGrid g;
  g.geometry.n_rows = rows.size();
  g.geometry.n_cols = rows.empty() ? 0 : rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != g.geometry.n_cols) throw Error(ErrorCode::InvalidArgument, "ragged grid");
    g.cells.insert(g.cells.end(), r.begin(), r.end());
  }
  return g;
}

class PyStore {
 public:
  explicit PyStore(std::optional<std::string> dir)
      : store_(dir ? RecordStore::open(*dir) : RecordStore()) {}

  py::dict ingest_lines(const std::vector<std::string>& lines) { return report_dict(svaa::ingest_lines(store_, lines)); }

  py::dict ingest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    return report_dict(store_.ingest(in));
  }

  std::shared_ptr<const StoreSnapshot> snap() const { return store_.snapshot(); }

 private:
  RecordStore store_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Analytics over multi-camera person detection records";

  static py::handle error = py::exception<Error>(m, "Error").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error(std::string(e.what()));
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  m.def("parse_record", [](const std::string& line) { return record_dict(parse_record(line)); });
  m.def("normalize_record", [](const std::string& line) { return serialize_record(parse_record(line)); });
  m.def("align_to_interval", [](const std::string& t) { return format_timestamp(align_to_interval(ts(t))); });

  py::class_<PyStore>(m, "Store")
      .def(py::init<std::optional<std::string>>(), py::arg("directory") = py::none())
      .def("ingest_lines", &PyStore::ingest_lines)
      .def("ingest_file", &PyStore::ingest_file)
      .def("__len__", [](const PyStore& s) { return s.snap()->size(); })
      .def("cameras", [](const PyStore& s) { return s.snap()->cameras(); })
      .def(
          "query_window",
          [](const PyStore& s, const std::string& t0, const std::string& t1, std::optional<std::set<CameraId>> cams) {
            auto sel = cams ? CameraSelection::of(*cams) : CameraSelection::all();
            py::list out;
            for (const auto& r : s.snap()->query_window(sel, ts(t0), ts(t1))) out.append(record_dict(r));
            return out;
          },
          py::arg("t0"), py::arg("t1"), py::arg("cameras") = py::none())
      .def("interval_counts",
           [](const PyStore& s, CameraId cam, const std::string& t0, const std::string& t1) {
             std::vector<std::pair<std::string, std::size_t>> out;
             for (const auto& c : s.snap()->interval_counts(cam, ts(t0), ts(t1))) {
               out.emplace_back(format_timestamp(c.window_start), c.count);
             }
             return out;
           })
      .def(
          "current_count",
          [](const PyStore& s, const std::string& now, double staleness) {
            return current_count(*s.snap(), ts(now), Micros{static_cast<std::int64_t>(staleness * 1e6)});
          },
          py::arg("now"), py::arg("staleness") = 5.0)
      .def(
          "hourly_average",
          [](const PyStore& s, const std::map<CameraId, std::string>& locations, const std::string& t0,
             const std::string& t1, std::optional<CameraId> camera, std::optional<std::string> location) {
            auto p = hourly_average(*s.snap(), to_group(camera, location), to_locations(locations), ts(t0), ts(t1));
            std::map<int, std::pair<double, std::size_t>> out;
            for (int h = 0; h < 24; ++h) {
              if (const auto& c = p.hours[static_cast<std::size_t>(h)]) out[h] = {c->mean, c->samples};
            }
            return out;
          },
          py::arg("locations"), py::arg("t0"), py::arg("t1"), py::arg("camera") = py::none(),
          py::arg("location") = py::none())
      .def("total_over_time",
           [](const PyStore& s, const std::string& t0, const std::string& t1, double bucket) {
             std::vector<std::pair<std::string, std::size_t>> out;
             for (const auto& p :
                  total_over_time(*s.snap(), ts(t0), ts(t1), Micros{static_cast<std::int64_t>(bucket * 1e6)})) {
               out.emplace_back(format_timestamp(p.bucket_start), p.cumulative);
             }
             return out;
           })
      .def(
          "peak_hours",
          [](const PyStore& s, const std::map<CameraId, std::string>& locations, const std::string& t0,
             const std::string& t1, std::size_t k, std::optional<CameraId> camera, std::optional<std::string> location) {
            std::vector<std::pair<int, double>> out;
            for (const auto& r :
                 peak_hours(*s.snap(), to_group(camera, location), to_locations(locations), ts(t0), ts(t1), k)) {
              out.emplace_back(r.hour, r.mean);
            }
            return out;
          },
          py::arg("locations"), py::arg("t0"), py::arg("t1"), py::arg("k") = 3, py::arg("camera") = py::none(),
          py::arg("location") = py::none())
      .def("window_bev",
           [](const PyStore& s, const CameraConfig& cam, const std::string& window) {
             std::vector<std::tuple<GlobalId, double, double>> out;
             for (const auto& p : window_bev(*s.snap(), cam.camera_id, cam, ts(window))) {
               out.emplace_back(p.global_id, p.x, p.y);
             }
             return out;
           })
      .def(
          "daily_heatmap",
          [](const PyStore& s, const CameraConfig& cam, const std::string& date, bool smooth, double sigma) {
            HeatmapOptions opt;
            opt.smooth = smooth;
            opt.smoothing.sigma = sigma;
            return rows_of(daily_heatmap(*s.snap(), cam, parse_date(date), opt));
          },
          py::arg("camera"), py::arg("date"), py::arg("smooth") = true, py::arg("sigma") = 2.0);

  m.def("percentile_nearest_rank",
        [](const std::vector<Count>& xs, double p) { return percentile_nearest_rank(xs, p); });

  py::class_<RollingHistory>(m, "RollingHistory")
      .def(py::init<std::size_t>(), py::arg("capacity") = 10080)
      .def("push", &RollingHistory::push)
      .def("percentile", &RollingHistory::percentile)
      .def("__len__", &RollingHistory::size)
      .def("values", &RollingHistory::values);

  m.def(
      "classify_occupancy",
      [](Count count, const RollingHistory& h, std::size_t min_samples) {
        return std::string(to_string(classify_occupancy(count, h, min_samples).level));
      },
      py::arg("count"), py::arg("history"), py::arg("min_samples") = 20);

  py::class_<RunningMoments>(m, "RunningMoments")
      .def(py::init<>())
      .def("add", &RunningMoments::add)
      .def_property_readonly("n", &RunningMoments::n)
      .def_property_readonly("mean", &RunningMoments::mean)
      .def_property_readonly("std", &RunningMoments::sample_std);

  m.def(
      "anomaly_check",
      [](const RunningMoments& stats, Count count, std::size_t min_samples) {
        auto v = anomaly_check(stats, count, {min_samples, 2.0});
        py::dict d;
        d["is_anomaly"] = v.is_anomaly;
        d["insufficient_data"] = v.insufficient_data;
        d["z"] = v.z_score;
        d["mean"] = v.mean;
        d["std"] = v.std;
        d["n"] = v.n;
        return d;
      },
      py::arg("stats"), py::arg("count"), py::arg("min_samples") = 30);

  py::class_<CameraConfig>(m, "CameraConfig")
      .def(py::init([](CameraId id, int width, int height, double min_teta, double max_teta, std::string location) {
             CameraConfig c{id, width, height, min_teta, max_teta, std::move(location)};
             c.validate();
             return c;
           }),
           py::arg("camera_id"), py::arg("width"), py::arg("height"), py::arg("min_teta"), py::arg("max_teta"),
           py::arg("location") = "default")
      .def_readonly("camera_id", &CameraConfig::camera_id)
      .def_readonly("location", &CameraConfig::location);

  m.def("scale_factor", &scale_factor);
  m.def("bev_transform", [](const std::string& line, const CameraConfig& cam) {
    auto p = bev_transform(parse_record(line), cam);
    return std::make_pair(p.x, p.y);
  });

  m.def(
      "accumulate_grid",
      [](const std::vector<std::pair<double, double>>& xy, double x_min, double y_min, double cell_w, double cell_h,
         std::size_t cols, std::size_t rows) {
        std::vector<BevPoint> pts;
        for (auto [x, y] : xy) pts.push_back({0, Timestamp{}, x, y});
        return rows_of(accumulate_grid(pts, {x_min, y_min, cell_w, cell_h, cols, rows}, GridMode::FixedBounds));
      });
  m.def(
      "gaussian_smooth",
      [](const std::vector<std::vector<double>>& rows, double sigma) {
        return rows_of(gaussian_smooth(grid_of(rows), {sigma}));
      },
      py::arg("grid"), py::arg("sigma") = 2.0);
  m.def(
      "render_pgm", [](const std::vector<std::vector<double>>& rows, double gamma) {
        return render_pgm(grid_of(rows), gamma);
      },
      py::arg("grid"), py::arg("gamma") = 1.0);

  m.def(
      "simulate",
      [](const std::string& t0, const std::string& t1, std::uint64_t seed, std::optional<std::string> profile_json) {
        SimProfile p = profile_json ? parse_profile(*profile_json) : default_profile();
        p.seed = seed;
        auto sim = generate(p, ts(t0), ts(t1));
        std::vector<std::string> lines;
        lines.reserve(sim.records.size());
        for (const auto& r : sim.records) lines.push_back(serialize_record(r));
        return py::make_tuple(lines, sim.truth.to_csv());
      },
      py::arg("t0"), py::arg("t1"), py::arg("seed") = 1, py::arg("profile") = py::none());

  m.def("default_config_json", [] { return dump_config(default_config()); });
  m.def("default_profile_json", [] { return dump_profile(default_profile()); });
}
