#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vital/features.hpp"
#include "vital/guidelines.hpp"
#include "vital/judge.hpp"
#include "vital/memory.hpp"
#include "vital/rhythm.hpp"
#include "vital/rules.hpp"
#include "vital/synth.hpp"

namespace vital {

struct MonitorConfig {
  PeakDetectorConfig detector;
  RRBand band;
  ScreenConfig screen;
  RuleConfig rules;
  MemoryConfig memory;
  JudgeConfig judge;
  bool judge_enabled = false;

  /// Header written as the first line of alerts.jsonl.
  nlohmann::json header() const;
};

struct WindowResult {
  MonitoringState state;
  std::vector<AlertRecord> alerts;
  RhythmAssessment rhythm;
  std::optional<JudgeSnapshot> snapshot;  // set on judge checkpoints
  std::optional<JudgeOutcome> judge;
};

/// Streaming proactive monitor for one patient. Windows must arrive in
/// order; the judge backend and guideline store must outlive the session.
class MonitorSession {
 public:
  MonitorSession(std::string patient_id, MonitorConfig cfg, const GuidelineStore* guidelines = nullptr,
                 CompletionClient* judge_backend = nullptr);

  /// Ground-truth annotations used only to fill the hidden state block. An
  /// empty list still enables the block (every window is then N).
  void set_reference(std::vector<Annotation> annotations);

  /// detect -> RR -> features -> screen -> state -> rules -> dedup ->
  /// memory update; every judge_period_windows-th window also runs the
  /// judge when enabled. Throws OrderingError on out-of-sequence windows.
  WindowResult process_window(const SampleWindow& w);

  const PatientMemory& memory() const { return memory_; }
  const MonitorConfig& config() const { return cfg_; }

 private:
  JudgeSnapshot make_snapshot(const MonitoringState& state, RhythmClass screen, const TrailingView& tv) const;
  std::optional<HiddenAnnotations> reference_block(const SampleWindow& w) const;

  MonitorConfig cfg_;
  const GuidelineStore* guidelines_;
  CompletionClient* judge_backend_;
  PatientMemory memory_;
  std::vector<Annotation> reference_;
  bool has_reference_ = false;
  struct RecentRR {
    double end_s;
    std::vector<double> rr_s;
  };
  std::deque<RecentRR> recent_rr_;
};

/// Per-patient replay result.
struct MonitorRun {
  std::map<std::string, PatientMemory> patients;
  std::size_t judge_calls = 0;
};

/// Groups windows by patient (stable in input order) and replays each.
/// `reference` maps patient id to annotations for the hidden block.
MonitorRun run_monitor(std::span<const SampleWindow> windows, const MonitorConfig& cfg,
                       const GuidelineStore* guidelines, CompletionClient* judge_backend,
                       const std::map<std::string, std::vector<Annotation>>& reference = {});

/// Writes <dir>/<patient_id>/{states,alerts}.jsonl for every patient.
void write_monitor_run(const MonitorRun& run, const std::filesystem::path& dir, const MonitorConfig& cfg, bool fair);

}  // namespace vital
