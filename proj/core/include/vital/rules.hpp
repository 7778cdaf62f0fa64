#pragma once

#include <string>
#include <vector>

#include "vital/memory.hpp"
#include "vital/state.hpp"

namespace vital {

struct RuleConfig {
  double brady_hr_bpm = 40.0;
  double tachy_hr_bpm = 150.0;
  double sustained_ratio = 0.8;
  double sustained_hr_threshold_bpm = 100.0;
  std::size_t sustained_min_samples = 20;
  double q_min = 0.5;
  int judge_period_windows = 20;

  bool operator==(const RuleConfig&) const = default;
  /// Throws ConfigError unless 0 < brady < sustained threshold < tachy,
  /// 0 < ratio <= 1 and the judge period is positive.
  void validate() const;
};

void to_json(nlohmann::json& j, const RuleConfig& c);
void from_json(const nlohmann::json& j, RuleConfig& c);

/// Rules that hold for this window, in fixed order (extremes first).
std::vector<AlertRule> evaluate_rules(const MonitoringState& state, const TrailingView& trailing,
                                      const RuleConfig& cfg = {});

Urgency rule_urgency(AlertRule r);
std::string rule_reason(AlertRule r, const MonitoringState& state, const TrailingView& trailing);

/// Metadata key listing the rules that held on a window, emitted or not.
inline constexpr const char* kRulesFiredKey = "rules_fired";
/// Metadata key holding the judge result on checkpoint windows.
inline constexpr const char* kJudgeKey = "judge";

/// Episode dedup. A rule alert is suppressed when the same rule held on
/// the immediately preceding window; a judge alert is suppressed when the
/// preceding checkpoint also intervened.
bool should_emit(AlertRule r, const PatientMemory& memory);

}  // namespace vital
