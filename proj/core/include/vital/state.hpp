#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vital/types.hpp"

namespace vital {

enum class AlertRule { extreme_bradycardia, extreme_tachycardia, sustained_tachycardia, judge_intervention };
std::string_view to_string(AlertRule r);
AlertRule parse_alert_rule(std::string_view s);

enum class Urgency { none, low, medium, high, critical };
std::string_view to_string(Urgency u);
Urgency parse_urgency(std::string_view s);

void to_json(nlohmann::json& j, AlertRule r);
void from_json(const nlohmann::json& j, AlertRule& r);
void to_json(nlohmann::json& j, Urgency u);
void from_json(const nlohmann::json& j, Urgency& u);

struct GuidelineRef {
  std::string guideline_id;
  std::string section_id;
  bool operator==(const GuidelineRef&) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GuidelineRef, guideline_id, section_id)

/// Annotation-derived fields. Used for ground truth and audit only and
/// stripped by leakage_filter.
struct HiddenAnnotations {
  std::optional<std::string> rhythm_class;
  std::optional<std::string> stress_label;
  std::optional<std::int64_t> protocol_label_id;
  std::optional<std::string> activity_label;
  std::optional<double> ecg_reference_hr_bpm;
  std::optional<std::string> sleep_stage;
  std::optional<double> sleep_epoch_duration_s;
  std::optional<bool> is_sleep;
  std::optional<bool> is_wake;
  std::optional<bool> is_rem;
  std::optional<bool> is_nrem;
  std::optional<bool> cap_a_overlap;
  std::optional<std::string> cap_subtype;
  std::optional<std::string> body_position;

  std::optional<std::string> previous_rhythm_class;
  std::optional<std::string> previous_stress_label;
  std::optional<std::int64_t> previous_protocol_label_id;
  std::optional<std::string> previous_activity_label;
  std::optional<std::string> previous_sleep_stage;
  std::optional<std::string> previous_body_position;

  std::optional<double> af_burden_ratio;
  std::optional<double> af_episode_duration_s;
  std::optional<std::int64_t> rhythm_transition_count;
  std::optional<double> rhythm_transition_count_per_hour;
  std::optional<double> stress_burden_ratio;
  std::optional<double> stress_duration_s;
  std::optional<std::string> dominant_stress_label;
  std::optional<std::int64_t> stress_transition_count;
  std::optional<double> stress_transition_count_per_hour;
  std::optional<std::int64_t> cap_a_count_window;
  std::optional<double> cap_a_total_duration_s_window;
  std::optional<std::int64_t> cap_a_count_5min;
  std::optional<double> cap_a_total_duration_s_5min;

  bool operator==(const HiddenAnnotations&) const = default;
};

void to_json(nlohmann::json& j, const HiddenAnnotations& h);
void from_json(const nlohmann::json& j, HiddenAnnotations& h);

/// Names of every hidden field, in declaration order.
std::span<const std::string_view> hidden_field_names();
bool is_hidden_field(std::string_view name);

struct MonitoringState {
  // identity
  std::string state_id;
  std::string patient_id;
  std::optional<std::string> subject_id;
  std::optional<std::string> recording_id;
  Dataset dataset = Dataset::synthetic;
  Modality modality = Modality::ECG;
  std::int64_t window_index = 0;
  double window_start_s = 0.0;
  double window_end_s = 0.0;
  double window_duration_s = 0.0;
  std::optional<double> recording_duration_s;
  // signal-derived
  std::optional<double> hr_bpm;
  std::optional<double> mean_hr_bpm;
  std::optional<double> max_hr_bpm;
  std::optional<double> previous_hr_bpm;
  std::optional<double> baseline_resting_hr;
  std::optional<double> hr_deviation_from_baseline;
  std::optional<double> sdnn_ms;
  std::optional<double> rmssd_ms;
  std::optional<double> signal_quality_score;
  std::optional<std::string> motion_level;
  // short-term aggregates
  std::optional<double> mean_hr_5min;
  std::optional<double> tachycardia_ratio_5min;
  // proactive alert context
  bool alert_triggered = false;
  std::optional<std::string> alert_rule;
  std::optional<std::string> alert_reason;
  std::optional<std::string> urgency;
  // containers
  nlohmann::json metadata = nlohmann::json::object();
  nlohmann::json dataset_specific = nlohmann::json::object();

  std::optional<HiddenAnnotations> hidden;

  bool operator==(const MonitoringState&) const = default;
};

/// Hidden fields are written flat next to the visible ones, and only
/// when the hidden block is present.
void to_json(nlohmann::json& j, const MonitoringState& s);
void from_json(const nlohmann::json& j, MonitoringState& s);

/// Throws IntegrityError on broken invariants (window end, alert block).
void validate_state(const MonitoringState& s);

/// Visible-only view: drops the hidden block and hidden-named keys inside
/// metadata and dataset_specific. Idempotent.
MonitoringState leakage_filter(const MonitoringState& s);
/// Same filter over a serialized state record.
nlohmann::json leakage_filter(const nlohmann::json& record);

struct AlertRecord {
  std::string patient_id;
  std::int64_t window_index = 0;
  double time_s = 0.0;
  AlertRule fired_rule = AlertRule::extreme_tachycardia;
  Urgency urgency = Urgency::medium;
  std::string reason;
  std::string advice;
  std::vector<GuidelineRef> cited_sections;

  bool operator==(const AlertRecord&) const = default;
};

void to_json(nlohmann::json& j, const AlertRecord& a);
void from_json(const nlohmann::json& j, AlertRecord& a);

}  // namespace vital
