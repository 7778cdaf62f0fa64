#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vital/state.hpp"
#include "vital/synth.hpp"

namespace vital {

struct EpisodeAnnotation {
  std::string patient_id;
  double onset_s = 0.0;
  double offset_s = 0.0;
  std::string label;
  bool operator==(const EpisodeAnnotation&) const = default;
};

void to_json(nlohmann::json& j, const EpisodeAnnotation& e);
void from_json(const nlohmann::json& j, EpisodeAnnotation& e);

/// Throws IntegrityError on onset >= offset or overlapping episodes of one
/// patient.
void validate_episodes(std::span<const EpisodeAnnotation> episodes);

/// Groups abnormal annotation intervals into episodes: labels are
/// normalized, "normal"/"N" intervals are dropped, and touching intervals
/// with the same label merge.
std::vector<EpisodeAnnotation> episodes_from_annotations(const std::string& patient_id,
                                                         std::span<const Annotation> annotations);

/// Reads either EpisodeAnnotation lines or bare {start_s, end_s, label}
/// lines; the latter take `default_patient`.
std::vector<EpisodeAnnotation> read_episodes(const std::filesystem::path& path, const std::string& default_patient);

struct ProactiveEvalConfig {
  double grace_s = 0.0;  // allowance after offset
};

struct EpisodeOutcome {
  EpisodeAnnotation episode;
  std::optional<double> latency_s;  // absent when missed
};

struct ProactiveReport {
  std::size_t total_alerts = 0;
  std::size_t matched_alerts = 0;
  std::size_t false_alerts = 0;
  std::size_t matched_episodes = 0;
  std::size_t missed_episodes = 0;
  double monitored_hours = 0.0;
  double far_per_hour = 0.0;
  std::optional<double> latency_median_s;
  std::vector<EpisodeOutcome> episodes;
  ProactiveEvalConfig config;
};

void to_json(nlohmann::json& j, const ProactiveReport& r);

/// An alert matches an episode of its patient when its time lies in
/// [onset, offset + grace]. Throws ConfigError when monitored_hours <= 0.
ProactiveReport eval_proactive(std::span<const AlertRecord> alerts, std::span<const EpisodeAnnotation> episodes,
                               double monitored_hours, const ProactiveEvalConfig& cfg = {});

struct RhythmReport {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> balanced_accuracy;
};

void to_json(nlohmann::json& j, const RhythmReport& r);

/// AF is the positive class; any other label is negative. Sizes must match.
RhythmReport eval_rhythm(std::span<const std::string> predicted, std::span<const std::string> truth);

/// Pairs (screen_rhythm metadata, hidden rhythm_class) from states that
/// carry both.
std::pair<std::vector<std::string>, std::vector<std::string>> rhythm_pairs(std::span<const MonitoringState> states);

}  // namespace vital
