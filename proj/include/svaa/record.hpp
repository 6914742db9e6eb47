#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "svaa/time.hpp"

namespace svaa {

using CameraId = std::uint32_t;
using GlobalId = std::uint64_t;

inline constexpr std::uint32_t kHumanClass = 0;

/// Pixel rectangle; (x, y) is the top-left corner.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }

  bool operator==(const BoundingBox&) const = default;
};

/// One row as archived by the server after global tracking.
struct DetectionRecord {
  Timestamp record_time{};
  CameraId camera_id = 0;
  std::uint32_t class_id = 0;
  BoundingBox bbox;
  std::uint64_t local_id = 0;
  GlobalId global_id = 0;
  // Opaque pass-through columns, kept as their serialized JSON text.
  std::optional<std::string> batch_id;
  std::optional<std::string> feature;

  bool is_human() const { return class_id == kHumanClass; }

  bool operator==(const DetectionRecord&) const = default;
};

/// Parses one newline-delimited JSON record. Throws Error with
/// MalformedLine, InvalidBBox or InvalidTimestamp.
DetectionRecord parse_record(std::string_view line);

/// Canonical single-line form (no trailing newline). Field order is fixed,
/// so identical records always serialize to identical bytes.
std::string serialize_record(const DetectionRecord& record);

/// Positive extent and nonnegative origin. Throws Error(InvalidBBox).
void validate_bbox(const BoundingBox& box);

/// As above, plus containment in a width x height frame.
void validate_bbox_in_frame(const BoundingBox& box, int width, int height);

}  // namespace svaa
