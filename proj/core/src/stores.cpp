#include "vital/stores.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vital/error.hpp"
#include "vital/jsonl.hpp"

namespace vital {

namespace {
constexpr double kEps = 1e-6;
}

void WindowStore::add(SampleWindow w) {
  validate_window(w);
  auto& v = by_key_[{w.dataset, w.patient_id}];
  auto pos = std::lower_bound(v.begin(), v.end(), w.start_s,
                              [](const SampleWindow& a, double s) { return a.start_s < s; });
  if (pos != v.end() && std::abs(pos->start_s - w.start_s) < kEps) {
    throw IntegrityError("window store: duplicate window at " + std::to_string(w.start_s) + " for " + w.patient_id);
  }
  v.insert(pos, std::move(w));
}

void WindowStore::add_all(std::span<const SampleWindow> ws) {
  for (const auto& w : ws) add(w);
}

WindowStore WindowStore::load_jsonl(const std::filesystem::path& path) {
  WindowStore store;
  std::size_t line = 0;
  for (const auto& row : read_jsonl(path)) {
    ++line;
    if (auto v = window_schema_violations(row); !v.empty()) {
      throw ParseError(path.string() + ": " + v.front(), line);
    }
    store.add(row.get<SampleWindow>());
  }
  return store;
}

std::vector<std::string> WindowStore::patients(std::optional<Dataset> dataset,
                                               std::optional<Modality> modality) const {
  std::set<std::string> out;
  for (const auto& [key, ws] : by_key_) {
    if (dataset && key.first != *dataset) continue;
    if (modality && (ws.empty() || ws.front().modality != *modality)) continue;
    out.insert(key.second);
  }
  return {out.begin(), out.end()};
}

const std::vector<SampleWindow>* WindowStore::windows(Dataset dataset, const std::string& patient_id) const {
  auto it = by_key_.find({dataset, patient_id});
  return it == by_key_.end() ? nullptr : &it->second;
}

const std::vector<SampleWindow>* WindowStore::windows(const std::string& patient_id) const {
  for (const auto& [key, ws] : by_key_) {
    if (key.second == patient_id) return &ws;
  }
  return nullptr;
}

std::vector<const SampleWindow*> WindowStore::range(Dataset dataset, const std::string& patient_id, double start_s,
                                                    double end_s) const {
  std::vector<const SampleWindow*> out;
  const auto* ws = windows(dataset, patient_id);
  if (!ws) return out;
  for (const auto& w : *ws) {
    if (w.start_s >= start_s - kEps && w.end_s() <= end_s + kEps) out.push_back(&w);
  }
  return out;
}

SampleWindow WindowStore::extract(Dataset dataset, const std::string& patient_id, double start_s,
                                  double end_s) const {
  if (!(end_s > start_s)) throw IntegrityError("window store: empty extraction span");
  const auto parts = range(dataset, patient_id, start_s, end_s);
  if (parts.empty()) {
    throw IntegrityError("window store: no windows for " + patient_id + " in [" + std::to_string(start_s) + ", " +
                         std::to_string(end_s) + "]");
  }
  if (std::abs(parts.front()->start_s - start_s) > kEps || std::abs(parts.back()->end_s() - end_s) > kEps) {
    throw IntegrityError("window store: span not aligned to stored windows for " + patient_id);
  }
  SampleWindow out = *parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto* w = parts[i];
    if (std::abs(w->start_s - out.end_s()) > kEps || w->fs != out.fs) {
      throw IntegrityError("window store: gap or rate change inside span for " + patient_id);
    }
    out.samples.insert(out.samples.end(), w->samples.begin(), w->samples.end());
    out.duration_s += w->duration_s;
  }
  return out;
}

std::size_t WindowStore::size() const {
  std::size_t n = 0;
  for (const auto& [key, ws] : by_key_) n += ws.size();
  return n;
}

void StateStore::put(const std::string& patient_id, std::vector<MonitoringState> states) {
  by_patient_[patient_id] = std::move(states);
}

StateStore StateStore::load_dir(const std::filesystem::path& dir) {
  StateStore store;
  if (!std::filesystem::is_directory(dir)) throw IntegrityError("state directory not found: " + dir.string());
  std::vector<std::filesystem::path> subdirs;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_directory() && std::filesystem::exists(e.path() / "states.jsonl")) subdirs.push_back(e.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  for (const auto& d : subdirs) {
    StateStore part = from_jsonl(d / "states.jsonl");
    for (auto& [pid, states] : part.by_patient_) store.by_patient_[pid] = std::move(states);
  }
  return store;
}

StateStore StateStore::from_jsonl(const std::filesystem::path& path) {
  StateStore store;
  std::size_t line = 0;
  for (const auto& row : read_jsonl(path)) {
    ++line;
    MonitoringState s;
    try {
      s = row.get<MonitoringState>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ": " + e.what(), line);
    }
    store.by_patient_[s.patient_id].push_back(std::move(s));
  }
  for (auto& [pid, states] : store.by_patient_) {
    std::stable_sort(states.begin(), states.end(),
                     [](const MonitoringState& a, const MonitoringState& b) { return a.window_index < b.window_index; });
  }
  return store;
}

std::vector<std::string> StateStore::patients() const {
  std::vector<std::string> out;
  for (const auto& [pid, s] : by_patient_) out.push_back(pid);
  return out;
}

const std::vector<MonitoringState>* StateStore::states(const std::string& patient_id) const {
  auto it = by_patient_.find(patient_id);
  return it == by_patient_.end() ? nullptr : &it->second;
}

std::vector<MonitoringState> StateStore::range(const std::string& patient_id, double start_s, double end_s) const {
  std::vector<MonitoringState> out;
  if (const auto* ss = states(patient_id)) {
    for (const auto& s : *ss) {
      if (s.window_start_s >= start_s - kEps && s.window_end_s <= end_s + kEps) out.push_back(s);
    }
  }
  return out;
}

StateStore StateStore::fair_view() const {
  StateStore out;
  for (const auto& [pid, ss] : by_patient_) {
    auto& v = out.by_patient_[pid];
    v.reserve(ss.size());
    for (const auto& s : ss) v.push_back(leakage_filter(s));
  }
  return out;
}

}  // namespace vital
