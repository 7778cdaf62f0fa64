#pragma once

#include <cstddef>
#include <deque>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vital/signal.hpp"
#include "vital/state.hpp"

namespace vital {

struct MemoryConfig {
  std::size_t raw_cache_windows = 64;
  double trailing_horizon_s = 300.0;
  double tachycardia_threshold_bpm = 100.0;
};

struct TrailingView {
  std::optional<double> mean_hr_5min;
  std::optional<double> tachycardia_ratio_5min;
  std::size_t tachycardia_sample_count = 0;
  bool operator==(const TrailingView&) const = default;
};

struct PersistOptions {
  bool fair = false;                  // write leakage-filtered states
  std::optional<nlohmann::json> header;  // first line of alerts.jsonl
};

/// Longitudinal record of one patient: every window summary, every emitted
/// alert and a bounded ring of recent raw windows. One writer at a time;
/// readers must not overlap an update.
class PatientMemory {
 public:
  explicit PatientMemory(std::string patient_id, MemoryConfig cfg = {});

  const std::string& patient_id() const { return patient_id_; }
  const MemoryConfig& config() const { return cfg_; }
  const std::vector<MonitoringState>& states() const { return states_; }
  const std::vector<AlertRecord>& alerts() const { return alerts_; }
  const std::deque<SampleWindow>& raw_windows() const { return raw_; }
  bool empty() const { return states_.empty(); }
  std::optional<std::int64_t> last_index() const;
  std::optional<double> session_max_hr() const { return max_hr_; }

  /// Appends the state (deriving previous_hr_bpm, max_hr_bpm, mean_hr_5min
  /// and tachycardia_ratio_5min) and its alerts. Throws OrderingError
  /// unless the index is last + 1 (0 for an empty memory); the memory is
  /// unchanged on any error.
  const MonitoringState& update(MonitoringState state, std::span<const AlertRecord> alerts = {});

  /// Keeps the last `raw_cache_windows` windows.
  void remember_window(SampleWindow w);

  /// Aggregates over states whose window end lies within the horizon of
  /// the latest window end.
  TrailingView trailing_view() const;
  TrailingView trailing_view(double horizon_s) const;
  /// Same view as if `next` had already been appended.
  TrailingView trailing_with(const MonitoringState& next) const;

  /// Newest first.
  std::vector<AlertRecord> recent_alerts(std::size_t k) const;
  std::optional<std::pair<AlertRecord, MonitoringState>> explain_last_alert() const;
  const MonitoringState* find_state(std::int64_t window_index) const;

  /// Writes states.jsonl and alerts.jsonl under `dir`.
  void persist(const std::filesystem::path& dir, const PersistOptions& opt = {}) const;
  /// Reads both files back verbatim (no re-derivation).
  static PatientMemory load(const std::filesystem::path& dir, MemoryConfig cfg = {});

  /// Equality over identity, state log and alert log. The raw cache is a
  /// transient buffer and is not compared.
  friend bool operator==(const PatientMemory& a, const PatientMemory& b) {
    return a.patient_id_ == b.patient_id_ && a.states_ == b.states_ && a.alerts_ == b.alerts_;
  }

 private:
  void append_verbatim(MonitoringState s);

  std::string patient_id_;
  MemoryConfig cfg_;
  std::vector<MonitoringState> states_;
  std::vector<AlertRecord> alerts_;
  std::deque<SampleWindow> raw_;
  std::optional<double> max_hr_;
};

/// Rescan helper shared by memory and tools: aggregates over `states`
/// ending within `horizon_s` of `now_end_s`.
TrailingView trailing_over(std::span<const MonitoringState> states, double now_end_s, double horizon_s,
                           double threshold_bpm);

}  // namespace vital
