#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "svaa/error.hpp"
#include "svaa/record.hpp"

namespace svaa {

/// A set of cameras, or every camera in the store.
class CameraSelection {
 public:
  static CameraSelection all() { return CameraSelection{}; }
  static CameraSelection of(std::set<CameraId> ids) { return CameraSelection{std::move(ids)}; }
  static CameraSelection one(CameraId id) { return CameraSelection{std::set<CameraId>{id}}; }

  bool is_all() const { return !ids_.has_value(); }
  bool contains(CameraId id) const { return !ids_ || ids_->count(id) != 0; }
  const std::set<CameraId>* ids() const { return ids_ ? &*ids_ : nullptr; }

 private:
  CameraSelection() = default;
  explicit CameraSelection(std::set<CameraId> ids) : ids_(std::move(ids)) {}

  std::optional<std::set<CameraId>> ids_;
};

struct IntervalCount {
  CameraId camera_id = 0;
  Timestamp window_start{};
  std::size_t count = 0;

  bool operator==(const IntervalCount&) const = default;
};

struct Rejection {
  std::size_t line_number = 0;  // 1-based
  ErrorCode code = ErrorCode::MalformedLine;
  std::string reason;
};

struct IngestReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::optional<Timestamp> first_time;
  std::optional<Timestamp> last_time;
  std::vector<Rejection> rejections;
};

/// Immutable view of the store at one ingest boundary. Records of each
/// camera are sorted by record_time; ties keep arrival order.
class StoreSnapshot {
 public:
  using RecordVector = std::vector<DetectionRecord>;

  StoreSnapshot() = default;
  explicit StoreSnapshot(std::map<CameraId, std::shared_ptr<const RecordVector>> cameras);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::vector<CameraId> cameras() const;

  std::span<const DetectionRecord> camera_records(CameraId camera) const;

  /// Records of one camera with t0 <= record_time < t1.
  std::span<const DetectionRecord> camera_range(CameraId camera, Timestamp t0, Timestamp t1) const;

  /// Records with t0 <= record_time < t1 on the selected cameras, merged in
  /// time order (ties by camera id). Throws InvertedRange when t0 > t1.
  std::vector<DetectionRecord> query_window(const CameraSelection& cameras, Timestamp t0, Timestamp t1) const;

  /// Visits the same records as query_window in unspecified order without copying.
  void for_each_in(const CameraSelection& cameras, Timestamp t0, Timestamp t1,
                   const std::function<void(const DetectionRecord&)>& visit) const;

  /// Distinct human global ids on the selected cameras in [t0, t1).
  std::size_t distinct_people(const CameraSelection& cameras, Timestamp t0, Timestamp t1) const;

  /// One entry per epoch-aligned 5-second window in [t0, t1), zeros included.
  /// Bounds not on the grid are aligned down.
  std::vector<IntervalCount> interval_counts(CameraId camera, Timestamp t0, Timestamp t1) const;

  std::optional<Timestamp> first_time() const;
  std::optional<Timestamp> last_time() const;

 private:
  friend class RecordStore;

  std::map<CameraId, std::shared_ptr<const RecordVector>> cameras_;
  std::size_t size_ = 0;
};

/// Append-only record store. In-memory, or backed by a directory holding
/// one newline-delimited file per camera.
///
/// One writer; readers call snapshot() and keep an immutable view that
/// later ingests never modify.
class RecordStore {
 public:
  using RejectLogger = std::function<void(const Rejection&)>;

  RecordStore();
  /// Opens (creating if needed on first write) a store directory and loads
  /// its records. Throws MalformedLine if a stored line no longer parses.
  static RecordStore open(const std::filesystem::path& dir);

  RecordStore(RecordStore&&) noexcept;
  RecordStore& operator=(RecordStore&&) noexcept;
  ~RecordStore();

  bool is_persistent() const;
  const std::optional<std::filesystem::path>& directory() const { return dir_; }

  /// Appends already-validated records and publishes a new snapshot.
  void append(std::span<const DetectionRecord> records);

  /// Parses each line of `source`; bad lines are reported and skipped.
  /// Blank lines are ignored. Throws StoreUnwritable if persisting fails.
  IngestReport ingest(std::istream& source, const RejectLogger& log = {});

  std::shared_ptr<const StoreSnapshot> snapshot() const;

  static std::filesystem::path camera_file(const std::filesystem::path& dir, CameraId camera);

 private:
  void persist(const std::map<CameraId, std::vector<DetectionRecord>>& batch);
  void publish(std::map<CameraId, std::vector<DetectionRecord>> batch);

  std::optional<std::filesystem::path> dir_;
  std::unique_ptr<std::mutex> mutex_;
  std::shared_ptr<const StoreSnapshot> current_;
};

/// Ingests every line of a vector of strings (convenience for tests/bindings).
IngestReport ingest_lines(RecordStore& store, std::span<const std::string> lines);

}  // namespace svaa
