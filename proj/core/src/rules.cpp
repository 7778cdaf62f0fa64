#include "vital/rules.hpp"

#include <cstdio>

#include "vital/error.hpp"

namespace vital {

namespace {

std::string fmt1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

bool listed(const nlohmann::json& metadata, std::string_view rule) {
  auto it = metadata.find(kRulesFiredKey);
  if (it == metadata.end() || !it->is_array()) return false;
  for (const auto& r : *it) {
    if (r.is_string() && r.get<std::string>() == rule) return true;
  }
  return false;
}

}  // namespace

void RuleConfig::validate() const {
  if (!(0.0 < brady_hr_bpm && brady_hr_bpm < sustained_hr_threshold_bpm && sustained_hr_threshold_bpm < tachy_hr_bpm)) {
    throw ConfigError("rules: need 0 < brady < sustained threshold < tachy");
  }
  if (!(sustained_ratio > 0.0 && sustained_ratio <= 1.0)) throw ConfigError("rules: sustained_ratio outside (0, 1]");
  if (!(q_min >= 0.0 && q_min <= 1.0)) throw ConfigError("rules: q_min outside [0, 1]");
  if (judge_period_windows <= 0) throw ConfigError("rules: judge_period_windows must be > 0");
}

void to_json(nlohmann::json& j, const RuleConfig& c) {
  j = {{"brady_hr_bpm", c.brady_hr_bpm},
       {"tachy_hr_bpm", c.tachy_hr_bpm},
       {"sustained_ratio", c.sustained_ratio},
       {"sustained_hr_threshold_bpm", c.sustained_hr_threshold_bpm},
       {"sustained_min_samples", c.sustained_min_samples},
       {"q_min", c.q_min},
       {"judge_period_windows", c.judge_period_windows},
       {"dedup_mode", "episode"}};
}

void from_json(const nlohmann::json& j, RuleConfig& c) {
  if (!j.is_object()) throw ConfigError("rule config must be an object");
  RuleConfig out;
  for (const auto& [key, value] : j.items()) {
    if (key == "brady_hr_bpm") out.brady_hr_bpm = value.get<double>();
    else if (key == "tachy_hr_bpm") out.tachy_hr_bpm = value.get<double>();
    else if (key == "sustained_ratio") out.sustained_ratio = value.get<double>();
    else if (key == "sustained_hr_threshold_bpm") out.sustained_hr_threshold_bpm = value.get<double>();
    else if (key == "sustained_min_samples") out.sustained_min_samples = value.get<std::size_t>();
    else if (key == "q_min") out.q_min = value.get<double>();
    else if (key == "judge_period_windows") out.judge_period_windows = value.get<int>();
    else if (key == "dedup_mode") {
      if (value != "episode") throw ConfigError("rules: only dedup_mode 'episode' is supported");
    } else {
      throw ConfigError("rule config: unknown key '" + key + "'");
    }
  }
  out.validate();
  c = out;
}

std::vector<AlertRule> evaluate_rules(const MonitoringState& state, const TrailingView& trailing,
                                      const RuleConfig& cfg) {
  std::vector<AlertRule> fired;
  const bool good = state.signal_quality_score && *state.signal_quality_score >= cfg.q_min;
  if (state.hr_bpm && good) {
    if (*state.hr_bpm < cfg.brady_hr_bpm) fired.push_back(AlertRule::extreme_bradycardia);
    if (*state.hr_bpm > cfg.tachy_hr_bpm) fired.push_back(AlertRule::extreme_tachycardia);
  }
  if (trailing.tachycardia_ratio_5min && *trailing.tachycardia_ratio_5min >= cfg.sustained_ratio &&
      trailing.tachycardia_sample_count >= cfg.sustained_min_samples) {
    fired.push_back(AlertRule::sustained_tachycardia);
  }
  return fired;
}

Urgency rule_urgency(AlertRule r) {
  switch (r) {
    case AlertRule::extreme_bradycardia:
    case AlertRule::extreme_tachycardia: return Urgency::high;
    case AlertRule::sustained_tachycardia: return Urgency::medium;
    case AlertRule::judge_intervention: return Urgency::medium;
  }
  return Urgency::medium;
}

std::string rule_reason(AlertRule r, const MonitoringState& state, const TrailingView& trailing) {
  const std::string hr = state.hr_bpm ? fmt1(*state.hr_bpm) : std::string("n/a");
  switch (r) {
    case AlertRule::extreme_bradycardia: return "Heart rate " + hr + " bpm below the bradycardia limit.";
    case AlertRule::extreme_tachycardia: return "Heart rate " + hr + " bpm above the tachycardia limit.";
    case AlertRule::sustained_tachycardia:
      return "Heart rate above the sustained threshold in " +
             fmt1(100.0 * trailing.tachycardia_ratio_5min.value_or(0.0)) + "% of " +
             std::to_string(trailing.tachycardia_sample_count) + " samples over the trailing 5 minutes.";
    case AlertRule::judge_intervention: return "Judge checkpoint intervention.";
  }
  return {};
}

bool should_emit(AlertRule r, const PatientMemory& memory) {
  const auto& states = memory.states();
  if (states.empty()) return true;
  if (r != AlertRule::judge_intervention) return !listed(states.back().metadata, to_string(r));
  for (auto it = states.rbegin(); it != states.rend(); ++it) {
    auto j = it->metadata.find(kJudgeKey);
    if (j == it->metadata.end()) continue;
    return !(j->is_object() && j->value("intervene", false));
  }
  return true;
}

}  // namespace vital
