#include "svaa/store.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>
#include <system_error>

namespace svaa {
namespace {

bool earlier(const DetectionRecord& a, const DetectionRecord& b) { return a.record_time < b.record_time; }

void check_range(Timestamp t0, Timestamp t1) {
  if (t0 > t1) {
    throw Error(ErrorCode::InvertedRange, format_timestamp(t0) + " is after " + format_timestamp(t1));
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

}  // namespace

// --- StoreSnapshot -------------------------------------------------------

StoreSnapshot::StoreSnapshot(std::map<CameraId, std::shared_ptr<const RecordVector>> cameras)
    : cameras_(std::move(cameras)) {
  for (const auto& [id, recs] : cameras_) size_ += recs->size();
}

std::vector<CameraId> StoreSnapshot::cameras() const {
  std::vector<CameraId> out;
  out.reserve(cameras_.size());
  for (const auto& [id, recs] : cameras_) out.push_back(id);
  return out;
}

std::span<const DetectionRecord> StoreSnapshot::camera_records(CameraId camera) const {
  auto it = cameras_.find(camera);
  if (it == cameras_.end()) return {};
  return {it->second->data(), it->second->size()};
}

std::span<const DetectionRecord> StoreSnapshot::camera_range(CameraId camera, Timestamp t0, Timestamp t1) const {
  check_range(t0, t1);
  auto all = camera_records(camera);
  auto lo = std::partition_point(all.begin(), all.end(), [&](const DetectionRecord& r) { return r.record_time < t0; });
  auto hi = std::partition_point(lo, all.end(), [&](const DetectionRecord& r) { return r.record_time < t1; });
  return {lo, hi};
}

std::vector<DetectionRecord> StoreSnapshot::query_window(const CameraSelection& cameras, Timestamp t0,
                                                         Timestamp t1) const {
  check_range(t0, t1);
  std::vector<std::span<const DetectionRecord>> runs;
  std::size_t total = 0;
  for (const auto& [id, recs] : cameras_) {
    if (!cameras.contains(id)) continue;
    auto run = camera_range(id, t0, t1);
    if (!run.empty()) {
      runs.push_back(run);
      total += run.size();
    }
  }

  std::vector<DetectionRecord> out;
  out.reserve(total);
  // k-way merge; runs are in ascending camera order so the run index breaks ties.
  using Head = std::pair<std::size_t, std::size_t>;  // (run, offset)
  auto later = [&](const Head& a, const Head& b) {
    const auto& ra = runs[a.first][a.second];
    const auto& rb = runs[b.first][b.second];
    if (ra.record_time != rb.record_time) return ra.record_time > rb.record_time;
    return a.first > b.first;
  };
  std::priority_queue<Head, std::vector<Head>, decltype(later)> heads(later);
  for (std::size_t i = 0; i < runs.size(); ++i) heads.emplace(i, 0);
  while (!heads.empty()) {
    auto [run, off] = heads.top();
    heads.pop();
    out.push_back(runs[run][off]);
    if (off + 1 < runs[run].size()) heads.emplace(run, off + 1);
  }
  return out;
}

void StoreSnapshot::for_each_in(const CameraSelection& cameras, Timestamp t0, Timestamp t1,
                                const std::function<void(const DetectionRecord&)>& visit) const {
  check_range(t0, t1);
  for (const auto& [id, recs] : cameras_) {
    if (!cameras.contains(id)) continue;
    for (const auto& r : camera_range(id, t0, t1)) visit(r);
  }
}

std::size_t StoreSnapshot::distinct_people(const CameraSelection& cameras, Timestamp t0, Timestamp t1) const {
  std::vector<GlobalId> ids;
  for_each_in(cameras, t0, t1, [&](const DetectionRecord& r) {
    if (r.is_human()) ids.push_back(r.global_id);
  });
  std::sort(ids.begin(), ids.end());
  return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

std::vector<IntervalCount> StoreSnapshot::interval_counts(CameraId camera, Timestamp t0, Timestamp t1) const {
  check_range(t0, t1);
  t0 = align_to_interval(t0);
  t1 = align_to_interval(t1);
  auto recs = camera_range(camera, t0, t1);

  std::vector<IntervalCount> out;
  out.reserve(static_cast<std::size_t>((t1 - t0) / kIntervalLength));
  std::vector<GlobalId> ids;
  auto it = recs.begin();
  for (Timestamp start = t0; start < t1; start += kIntervalLength) {
    Timestamp end = start + kIntervalLength;
    ids.clear();
    for (; it != recs.end() && it->record_time < end; ++it) {
      if (it->is_human()) ids.push_back(it->global_id);
    }
    std::sort(ids.begin(), ids.end());
    auto distinct = static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
    out.push_back({camera, start, distinct});
  }
  return out;
}

std::optional<Timestamp> StoreSnapshot::first_time() const {
  std::optional<Timestamp> out;
  for (const auto& [id, recs] : cameras_) {
    if (!recs->empty() && (!out || recs->front().record_time < *out)) out = recs->front().record_time;
  }
  return out;
}

std::optional<Timestamp> StoreSnapshot::last_time() const {
  std::optional<Timestamp> out;
  for (const auto& [id, recs] : cameras_) {
    if (!recs->empty() && (!out || recs->back().record_time > *out)) out = recs->back().record_time;
  }
  return out;
}

// --- RecordStore ---------------------------------------------------------

RecordStore::RecordStore()
    : mutex_(std::make_unique<std::mutex>()), current_(std::make_shared<const StoreSnapshot>()) {}

RecordStore::RecordStore(RecordStore&&) noexcept = default;
RecordStore& RecordStore::operator=(RecordStore&&) noexcept = default;
RecordStore::~RecordStore() = default;

bool RecordStore::is_persistent() const { return dir_.has_value(); }

std::filesystem::path RecordStore::camera_file(const std::filesystem::path& dir, CameraId camera) {
  return dir / ("camera_" + std::to_string(camera) + ".jsonl");
}

RecordStore RecordStore::open(const std::filesystem::path& dir) {
  RecordStore store;
  store.dir_ = dir;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return store;

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("camera_", 0) == 0 && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::map<CameraId, std::vector<DetectionRecord>> loaded;
  std::string line;
  for (const auto& file : files) {
    std::ifstream in(file);
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto text = trim(line);
      if (text.empty()) continue;
      try {
        auto rec = parse_record(text);
        loaded[rec.camera_id].push_back(std::move(rec));
      } catch (const Error& e) {
        throw Error(ErrorCode::MalformedLine,
                    file.string() + ":" + std::to_string(line_no) + ": corrupt store line (" + e.what() + ")");
      }
    }
  }
  store.publish(std::move(loaded));
  return store;
}

void RecordStore::persist(const std::map<CameraId, std::vector<DetectionRecord>>& batch) {
  if (!dir_) return;
  std::error_code ec;
  std::filesystem::create_directories(*dir_, ec);
  if (ec || !std::filesystem::is_directory(*dir_)) {
    throw Error(ErrorCode::StoreUnwritable, "cannot create store directory " + dir_->string());
  }
  std::string buffer;
  for (const auto& [camera, recs] : batch) {
    buffer.clear();
    for (const auto& r : recs) {
      buffer += serialize_record(r);
      buffer += '\n';
    }
    auto path = camera_file(*dir_, camera);
    std::ofstream out(path, std::ios::app | std::ios::binary);
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::StoreUnwritable, "cannot append to " + path.string());
  }
}

void RecordStore::publish(std::map<CameraId, std::vector<DetectionRecord>> batch) {
  std::lock_guard lock(*mutex_);
  // Untouched cameras share storage with the previous snapshot.
  auto next = current_->cameras_;
  for (auto& [id, recs] : batch) {
    if (recs.empty()) continue;
    std::stable_sort(recs.begin(), recs.end(), earlier);
    auto merged = std::make_shared<StoreSnapshot::RecordVector>();
    if (auto it = next.find(id); it != next.end()) {
      merged->reserve(it->second->size() + recs.size());
      merged->assign(it->second->begin(), it->second->end());
    }
    auto mid = merged->insert(merged->end(), std::make_move_iterator(recs.begin()),
                              std::make_move_iterator(recs.end()));
    std::inplace_merge(merged->begin(), mid, merged->end(), earlier);
    next[id] = std::move(merged);
  }
  current_ = std::make_shared<const StoreSnapshot>(std::move(next));
}

void RecordStore::append(std::span<const DetectionRecord> records) {
  std::map<CameraId, std::vector<DetectionRecord>> batch;
  for (const auto& r : records) {
    validate_bbox(r.bbox);
    batch[r.camera_id].push_back(r);
  }
  persist(batch);
  publish(std::move(batch));
}

IngestReport RecordStore::ingest(std::istream& source, const RejectLogger& log) {
  IngestReport report;
  std::map<CameraId, std::vector<DetectionRecord>> batch;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    auto text = trim(line);
    if (text.empty()) continue;
    try {
      auto rec = parse_record(text);
      if (!report.first_time || rec.record_time < *report.first_time) report.first_time = rec.record_time;
      if (!report.last_time || rec.record_time > *report.last_time) report.last_time = rec.record_time;
      batch[rec.camera_id].push_back(std::move(rec));
      ++report.accepted;
    } catch (const Error& e) {
      Rejection rej{line_no, e.code(), e.what()};
      if (log) log(rej);
      report.rejections.push_back(std::move(rej));
      ++report.rejected;
    }
  }
  persist(batch);
  publish(std::move(batch));
  return report;
}

std::shared_ptr<const StoreSnapshot> RecordStore::snapshot() const {
  std::lock_guard lock(*mutex_);
  return current_;
}

IngestReport ingest_lines(RecordStore& store, std::span<const std::string> lines) {
  std::string joined;
  for (const auto& l : lines) {
    joined += l;
    joined += '\n';
  }
  std::istringstream in(joined);
  return store.ingest(in);
}

}  // namespace svaa
