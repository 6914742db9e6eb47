#include "svaa/heatmap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "svaa/error.hpp"

namespace svaa {
namespace {

void check_geometry(const GridGeometry& g, bool need_extent) {
  if (!(g.cell_width > 0.0) || !(g.cell_height > 0.0) || !std::isfinite(g.cell_width) ||
      !std::isfinite(g.cell_height)) {
    throw Error(ErrorCode::InvalidArgument, "cell size must be positive");
  }
  if (need_extent && (g.n_cols == 0 || g.n_rows == 0)) {
    throw Error(ErrorCode::InvalidArgument, "fixed grid needs at least one row and column");
  }
}

std::ptrdiff_t cell_index(double v, double origin, double size) {
  return static_cast<std::ptrdiff_t>(std::floor((v - origin) / size));
}

// One mass-preserving 1-D pass over `len` lines of `n` cells each, spaced
// `stride` apart within a line and `line_step` apart between lines.
void smooth_pass(const std::vector<double>& src, std::vector<double>& dst, std::size_t n, std::size_t lines,
                 std::size_t stride, std::size_t line_step, std::span<const double> kernel, int radius) {
  std::fill(dst.begin(), dst.end(), 0.0);
  auto len = static_cast<std::ptrdiff_t>(n);
  for (std::size_t line = 0; line < lines; ++line) {
    std::size_t base = line * line_step;
    for (std::ptrdiff_t i = 0; i < len; ++i) {
      double mass = src[base + static_cast<std::size_t>(i) * stride];
      if (mass == 0.0) continue;
      std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - radius);
      std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len - 1, i + radius);
      double norm = 0.0;
      for (std::ptrdiff_t j = lo; j <= hi; ++j) norm += kernel[static_cast<std::size_t>(j - i + radius)];
      double scale = mass / norm;
      for (std::ptrdiff_t j = lo; j <= hi; ++j) {
        dst[base + static_cast<std::size_t>(j) * stride] += scale * kernel[static_cast<std::size_t>(j - i + radius)];
      }
    }
  }
}

}  // namespace

double HeatGrid::total_mass() const {
  double sum = 0.0;
  for (double v : cells) sum += v;
  return sum;
}

GridGeometry default_fixed_geometry(const CameraConfig& cam, std::size_t n_cols, std::size_t n_rows) {
  if (n_cols == 0 || n_rows == 0) throw Error(ErrorCode::InvalidArgument, "grid needs at least one row and column");
  double depth = max_depth(cam);
  return {-depth, 0.0, 2.0 * depth / static_cast<double>(n_cols), depth / static_cast<double>(n_rows), n_cols, n_rows};
}

HeatGrid accumulate_grid(std::span<const BevPoint> points, const GridGeometry& geometry, GridMode mode) {
  HeatGrid grid;
  if (mode == GridMode::FixedBounds) {
    check_geometry(geometry, true);
    grid.geometry = geometry;
    grid.cells.assign(geometry.n_rows * geometry.n_cols, 0.0);
    auto max_col = static_cast<std::ptrdiff_t>(geometry.n_cols) - 1;
    auto max_row = static_cast<std::ptrdiff_t>(geometry.n_rows) - 1;
    for (const auto& p : points) {
      auto col = std::clamp<std::ptrdiff_t>(cell_index(p.x, geometry.x_min, geometry.cell_width), 0, max_col);
      auto row = std::clamp<std::ptrdiff_t>(cell_index(p.y, geometry.y_min, geometry.cell_height), 0, max_row);
      grid.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col)) += 1.0;
    }
    return grid;
  }

  check_geometry(geometry, false);
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "no points to define a grid extent");
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
  }
  GridGeometry g = geometry;
  g.x_min = std::floor(min_x / g.cell_width) * g.cell_width;
  g.y_min = std::floor(min_y / g.cell_height) * g.cell_height;
  std::ptrdiff_t max_col = 0;
  std::ptrdiff_t max_row = 0;
  for (const auto& p : points) {
    max_col = std::max(max_col, cell_index(p.x, g.x_min, g.cell_width));
    max_row = std::max(max_row, cell_index(p.y, g.y_min, g.cell_height));
  }
  g.n_cols = static_cast<std::size_t>(max_col) + 1;
  g.n_rows = static_cast<std::size_t>(max_row) + 1;
  grid.geometry = g;
  grid.cells.assign(g.n_rows * g.n_cols, 0.0);
  for (const auto& p : points) {
    auto col = std::max<std::ptrdiff_t>(0, cell_index(p.x, g.x_min, g.cell_width));
    auto row = std::max<std::ptrdiff_t>(0, cell_index(p.y, g.y_min, g.cell_height));
    grid.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col)) += 1.0;
  }
  return grid;
}

int SmoothingSpec::radius() const { return static_cast<int>(std::ceil(3.0 * sigma)); }

std::vector<double> gaussian_kernel(const SmoothingSpec& spec) {
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  int r = spec.radius();
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    double v = std::exp(-0.5 * (i * i) / (spec.sigma * spec.sigma));
    k[static_cast<std::size_t>(i + r)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

HeatGrid gaussian_smooth(const HeatGrid& grid, const SmoothingSpec& spec) {
  auto kernel = gaussian_kernel(spec);
  int radius = spec.radius();
  HeatGrid out = grid;
  std::size_t cols = grid.geometry.n_cols;
  std::size_t rows = grid.geometry.n_rows;
  if (grid.cells.empty()) return out;
  std::vector<double> tmp(grid.cells.size());
  smooth_pass(grid.cells, tmp, cols, rows, 1, cols, kernel, radius);  // along x
  smooth_pass(tmp, out.cells, rows, cols, cols, 1, kernel, radius);   // along y
  for (double& v : out.cells) v = std::max(v, 0.0);
  return out;
}

double peak_intensity(const HeatGrid& grid) {
  double peak = 0.0;
  for (double v : grid.cells) peak = std::max(peak, v);
  return peak;
}

std::string render_pgm(const HeatGrid& grid, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  const auto& g = grid.geometry;
  std::string out = "P2\n" + std::to_string(g.n_cols) + " " + std::to_string(g.n_rows) + "\n255\n";
  double peak = peak_intensity(grid);
  for (std::size_t r = 0; r < g.n_rows; ++r) {
    for (std::size_t c = 0; c < g.n_cols; ++c) {
      long level = 0;
      if (peak > 0.0) level = std::lround(255.0 * std::pow(grid.at(r, c) / peak, gamma));
      if (c > 0) out += ' ';
      out += std::to_string(std::clamp(level, 0L, 255L));
    }
    out += '\n';
  }
  return out;
}

std::string render_csv(const HeatGrid& grid) {
  const auto& g = grid.geometry;
  std::string out;
  char buf[32];
  for (std::size_t r = 0; r < g.n_rows; ++r) {
    for (std::size_t c = 0; c < g.n_cols; ++c) {
      if (c > 0) out += ',';
      auto res = std::to_chars(buf, buf + sizeof buf, grid.at(r, c), std::chars_format::general, 9);
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

HeatGrid daily_heatmap(const StoreSnapshot& store, const CameraConfig& cam, std::chrono::sys_days date,
                       const HeatmapOptions& options) {
  auto points = daily_bev(store, cam, date);
  HeatGrid grid;
  if (options.mode == GridMode::FixedBounds) {
    grid = accumulate_grid(points, default_fixed_geometry(cam, options.n_cols, options.n_rows), GridMode::FixedBounds);
  } else if (points.empty()) {
    grid.geometry = {0.0, 0.0, options.cell_size, options.cell_size, 0, 0};
  } else {
    grid = accumulate_grid(points, {0.0, 0.0, options.cell_size, options.cell_size, 0, 0}, GridMode::DataExtent);
  }
  if (options.smooth) grid = gaussian_smooth(grid, options.smoothing);
  grid.camera_id = cam.camera_id;
  grid.date = date;
  return grid;
}

}  // namespace svaa
