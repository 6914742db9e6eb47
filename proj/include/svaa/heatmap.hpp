#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svaa/birdseye.hpp"

namespace svaa {

/// Rectangular lattice over the ground plane. Column c covers
/// [x_min + c*cell_width, x_min + (c+1)*cell_width); rows likewise along y.
struct GridGeometry {
  double x_min = 0.0;
  double y_min = 0.0;
  double cell_width = 1.0;
  double cell_height = 1.0;
  std::size_t n_cols = 0;
  std::size_t n_rows = 0;

  bool operator==(const GridGeometry&) const = default;
};

enum class GridMode { FixedBounds, DataExtent };

/// Row-major nonnegative cells; row 0 is the row nearest the camera.
struct HeatGrid {
  GridGeometry geometry;
  std::vector<double> cells;
  CameraId camera_id = 0;
  std::optional<std::chrono::sys_days> date;

  double at(std::size_t row, std::size_t col) const { return cells[row * geometry.n_cols + col]; }
  double& at(std::size_t row, std::size_t col) { return cells[row * geometry.n_cols + col]; }
  double total_mass() const;
};

/// x in [-D, D], y in [0, D] with D = max_depth(cam), split into cols x rows cells.
GridGeometry default_fixed_geometry(const CameraConfig& cam, std::size_t n_cols = 64, std::size_t n_rows = 64);

/// Integer counts per cell. FixedBounds clamps outliers onto the border
/// cells of `geometry`. DataExtent anchors the lattice (cell size taken
/// from geometry.cell_width / cell_height) at the smallest occupied cell and
/// sizes the grid (max_row + 1, max_col + 1); it throws EmptyInput on no points.
HeatGrid accumulate_grid(std::span<const BevPoint> points, const GridGeometry& geometry, GridMode mode);

struct SmoothingSpec {
  double sigma = 2.0;  // in cells

  int radius() const;
};

/// Sampled Gaussian of length 2*radius+1, normalized to sum 1.
std::vector<double> gaussian_kernel(const SmoothingSpec& spec);

/// Separable Gaussian blur. Near the border each source cell's kernel is
/// renormalized over the in-grid targets, so the total mass is preserved.
HeatGrid gaussian_smooth(const HeatGrid& grid, const SmoothingSpec& spec);

/// Largest cell; 0 for an empty grid.
double peak_intensity(const HeatGrid& grid);

/// Plain PGM ("P2", maxval 255): round(255 * (v / peak)^gamma), one grid
/// row per line. An all-zero grid renders as zeros.
std::string render_pgm(const HeatGrid& grid, double gamma = 1.0);

/// Row-major comma-separated cells, 9 significant digits, one row per line.
std::string render_csv(const HeatGrid& grid);

struct HeatmapOptions {
  GridMode mode = GridMode::FixedBounds;
  std::size_t n_cols = 64;
  std::size_t n_rows = 64;
  double cell_size = 1.0;  // DataExtent only
  SmoothingSpec smoothing;
  bool smooth = true;
};

/// Accumulates one camera's BEV points of a UTC day and optionally smooths
/// them. An empty day in DataExtent mode yields an empty 0x0 grid.
HeatGrid daily_heatmap(const StoreSnapshot& store, const CameraConfig& cam, std::chrono::sys_days date,
                       const HeatmapOptions& options);

}  // namespace svaa
