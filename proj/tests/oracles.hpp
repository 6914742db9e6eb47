#pragma once

// Brute-force reference computations. Nothing here calls into the code
// paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "svaa/birdseye.hpp"
#include "svaa/heatmap.hpp"
#include "svaa/record.hpp"

namespace oracle {

inline std::uint32_t sorted_percentile(std::vector<std::uint32_t> values, double p) {
  std::sort(values.begin(), values.end());
  // Smallest rank r with r >= p*n/100, in exact rational arithmetic for
  // integer-valued p * 1e6.
  auto n = static_cast<long long>(values.size());
  auto scaled = static_cast<long long>(std::llround(p * 1e6));
  long long rank = (scaled * n + 100'000'000LL - 1) / 100'000'000LL;
  rank = std::clamp<long long>(rank, 1, n);
  return values[static_cast<std::size_t>(rank - 1)];
}

struct Moments {
  double mean = 0.0;
  double sample_std = 0.0;
};

inline Moments two_pass(std::span<const double> xs) {
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  long double mean = sum / static_cast<long double>(xs.size());
  long double ss = 0.0L;
  for (double x : xs) ss += (x - mean) * (x - mean);
  Moments m;
  m.mean = static_cast<double>(mean);
  m.sample_std = xs.size() > 1 ? static_cast<double>(std::sqrt(ss / static_cast<long double>(xs.size() - 1))) : 0.0;
  return m;
}

inline std::vector<svaa::DetectionRecord> scan(std::span<const svaa::DetectionRecord> all,
                                               const std::set<svaa::CameraId>* cameras, svaa::Timestamp t0,
                                               svaa::Timestamp t1) {
  std::vector<svaa::DetectionRecord> out;
  for (const auto& r : all) {
    if (r.record_time >= t0 && r.record_time < t1 && (!cameras || cameras->count(r.camera_id))) out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.record_time != b.record_time) return a.record_time < b.record_time;
    return a.camera_id < b.camera_id;
  });
  return out;
}

inline std::size_t distinct_humans(std::span<const svaa::DetectionRecord> all, const std::set<svaa::CameraId>* cameras,
                                   svaa::Timestamp t0, svaa::Timestamp t1) {
  std::set<svaa::GlobalId> ids;
  for (const auto& r : all) {
    if (r.class_id == 0 && r.record_time >= t0 && r.record_time < t1 && (!cameras || cameras->count(r.camera_id))) {
      ids.insert(r.global_id);
    }
  }
  return ids.size();
}

/// Projection written out directly from the model definition.
struct BevXY {
  double x;
  double y;
};

inline BevXY project(double bx, double by, double bw, double bh, double width, double height, double min_deg,
                     double max_deg) {
  (void)by;
  (void)bw;
  double theta = (min_deg + max_deg) * 0.5 * std::numbers::pi / 180.0;
  double nh = bh / height;
  if (nh < 0.01) nh = 0.01;
  double depth = std::sin(theta) / std::cos(theta) / nh;
  double cx = bx + bw * 0.5;
  return {(cx / width - 0.5) * depth, depth};
}

/// Counts points whose coordinates fall inside each cell's half-open box.
inline std::vector<double> bin_points(std::span<const svaa::BevPoint> pts, const svaa::GridGeometry& g,
                                      bool clamp_border) {
  std::vector<double> cells(g.n_rows * g.n_cols, 0.0);
  for (const auto& p : pts) {
    long col = -1;
    long row = -1;
    for (std::size_t c = 0; c < g.n_cols; ++c) {
      double lo = g.x_min + static_cast<double>(c) * g.cell_width;
      if (p.x >= lo && p.x < lo + g.cell_width) col = static_cast<long>(c);
    }
    for (std::size_t r = 0; r < g.n_rows; ++r) {
      double lo = g.y_min + static_cast<double>(r) * g.cell_height;
      if (p.y >= lo && p.y < lo + g.cell_height) row = static_cast<long>(r);
    }
    if (clamp_border) {
      if (col < 0) col = p.x < g.x_min ? 0 : static_cast<long>(g.n_cols) - 1;
      if (row < 0) row = p.y < g.y_min ? 0 : static_cast<long>(g.n_rows) - 1;
    }
    if (col >= 0 && row >= 0) cells[static_cast<std::size_t>(row) * g.n_cols + static_cast<std::size_t>(col)] += 1.0;
  }
  return cells;
}

/// Non-separable Gaussian scatter: each source cell spreads its mass over
/// the in-grid cells within the truncation window, weights normalized by the
/// full 2-D in-grid kernel sum.
inline std::vector<double> direct_smooth(const std::vector<double>& cells, std::size_t rows, std::size_t cols,
                                         double sigma) {
  int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> out(cells.size(), 0.0);
  auto g = [&](int d) { return std::exp(-0.5 * d * d / (sigma * sigma)); };
  for (int sr = 0; sr < static_cast<int>(rows); ++sr) {
    for (int sc = 0; sc < static_cast<int>(cols); ++sc) {
      double mass = cells[static_cast<std::size_t>(sr) * cols + static_cast<std::size_t>(sc)];
      if (mass == 0.0) continue;
      double norm = 0.0;
      for (int dr = -r; dr <= r; ++dr) {
        for (int dc = -r; dc <= r; ++dc) {
          int tr = sr + dr, tc = sc + dc;
          if (tr >= 0 && tc >= 0 && tr < static_cast<int>(rows) && tc < static_cast<int>(cols)) norm += g(dr) * g(dc);
        }
      }
      for (int dr = -r; dr <= r; ++dr) {
        for (int dc = -r; dc <= r; ++dc) {
          int tr = sr + dr, tc = sc + dc;
          if (tr >= 0 && tc >= 0 && tr < static_cast<int>(rows) && tc < static_cast<int>(cols)) {
            out[static_cast<std::size_t>(tr) * cols + static_cast<std::size_t>(tc)] += mass * g(dr) * g(dc) / norm;
          }
        }
      }
    }
  }
  return out;
}

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Small random store over a few cameras and a one-hour span.
inline std::vector<svaa::DetectionRecord> random_records(std::mt19937_64& rng, std::size_t n, svaa::Timestamp t0,
                                                         int span_seconds, int cameras, int ids) {
  std::uniform_int_distribution<int> at(0, span_seconds * 1000 - 1);
  std::uniform_int_distribution<int> cam(1, cameras);
  std::uniform_int_distribution<int> gid(1, ids);
  std::uniform_int_distribution<int> cls(0, 9);
  std::vector<svaa::DetectionRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    svaa::DetectionRecord r;
    r.record_time = t0 + std::chrono::milliseconds{at(rng)};
    r.camera_id = static_cast<svaa::CameraId>(cam(rng));
    r.class_id = cls(rng) == 0 ? 2u : 0u;
    r.bbox = {10, 20, 30, 60};
    r.local_id = 1;
    r.global_id = static_cast<svaa::GlobalId>(gid(rng));
    out.push_back(r);
  }
  return out;
}

}  // namespace oracle
