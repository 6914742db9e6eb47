#include "svaa/record.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "svaa/error.hpp"

namespace svaa {
namespace {

using json = nlohmann::json;

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::MalformedLine, why); }

const json& field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) malformed(std::string("missing field '") + name + "'");
  return *it;
}

std::uint64_t read_uint(const json& obj, const char* name, bool positive) {
  const json& v = field(obj, name);
  std::uint64_t out = 0;
  if (v.is_number_unsigned()) {
    out = v.get<std::uint64_t>();
  } else if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) malformed(std::string("'") + name + "' is negative");
    out = v.get<std::uint64_t>();
  } else {
    malformed(std::string("'") + name + "' is not an integer");
  }
  if (positive && out == 0) malformed(std::string("'") + name + "' must be positive");
  return out;
}

void append_number(std::string& out, double v) {
  char buf[32];
  if (v == std::floor(v) && std::fabs(v) < 9.007199254740992e15) {
    auto res = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(v));
    out.append(buf, res.ptr);
  } else {
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
  }
}

void append_uint(std::string& out, std::uint64_t v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

void validate_bbox(const BoundingBox& box) {
  if (!std::isfinite(box.x) || !std::isfinite(box.y) || !std::isfinite(box.w) || !std::isfinite(box.h)) {
    throw Error(ErrorCode::InvalidBBox, "non-finite coordinate");
  }
  if (box.w <= 0.0 || box.h <= 0.0) throw Error(ErrorCode::InvalidBBox, "width and height must be positive");
  if (box.x < 0.0 || box.y < 0.0) throw Error(ErrorCode::InvalidBBox, "top-left corner must be nonnegative");
}

void validate_bbox_in_frame(const BoundingBox& box, int width, int height) {
  validate_bbox(box);
  if (box.x + box.w > width || box.y + box.h > height) {
    throw Error(ErrorCode::InvalidBBox, "box exceeds the camera frame");
  }
}

DetectionRecord parse_record(std::string_view line) {
  json obj = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) malformed("not valid JSON");
  if (!obj.is_object()) malformed("record must be a JSON object");

  DetectionRecord rec;
  const json& time = field(obj, "record_time");
  if (!time.is_string()) throw Error(ErrorCode::InvalidTimestamp, "record_time must be a string");
  rec.record_time = parse_timestamp(time.get_ref<const std::string&>());

  rec.camera_id = static_cast<CameraId>(read_uint(obj, "camera_id", true));
  rec.class_id = static_cast<std::uint32_t>(read_uint(obj, "class_id", false));
  rec.local_id = read_uint(obj, "local_id", true);
  rec.global_id = read_uint(obj, "global_id", true);

  const json& bbox = field(obj, "bbox");
  if (!bbox.is_array() || bbox.size() != 4) malformed("bbox must be a 4-element array [x,y,w,h]");
  for (const auto& v : bbox) {
    if (!v.is_number()) malformed("bbox entries must be numbers");
  }
  rec.bbox = {bbox[0].get<double>(), bbox[1].get<double>(), bbox[2].get<double>(), bbox[3].get<double>()};
  validate_bbox(rec.bbox);

  if (auto it = obj.find("batch_id"); it != obj.end() && !it->is_null()) rec.batch_id = it->dump();
  if (auto it = obj.find("feature"); it != obj.end() && !it->is_null()) rec.feature = it->dump();
  return rec;
}

std::string serialize_record(const DetectionRecord& r) {
  std::string out;
  out.reserve(160 + (r.feature ? r.feature->size() : 0));
  out += "{\"record_time\":\"";
  out += format_timestamp(r.record_time);
  out += "\",\"camera_id\":";
  append_uint(out, r.camera_id);
  out += ",\"class_id\":";
  append_uint(out, r.class_id);
  out += ",\"bbox\":[";
  append_number(out, r.bbox.x);
  out += ',';
  append_number(out, r.bbox.y);
  out += ',';
  append_number(out, r.bbox.w);
  out += ',';
  append_number(out, r.bbox.h);
  out += "],\"local_id\":";
  append_uint(out, r.local_id);
  out += ",\"global_id\":";
  append_uint(out, r.global_id);
  if (r.batch_id) {
    out += ",\"batch_id\":";
    out += *r.batch_id;
  }
  if (r.feature) {
    out += ",\"feature\":";
    out += *r.feature;
  }
  out += '}';
  return out;
}

}  // namespace svaa
