#include "vital/state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "vital/error.hpp"

namespace vital {

#define VITAL_HIDDEN_FIELDS(X)                                                                                 \
  X(rhythm_class)                                                                                              \
  X(stress_label)                                                                                              \
  X(protocol_label_id)                                                                                         \
  X(activity_label)                                                                                            \
  X(ecg_reference_hr_bpm)                                                                                      \
  X(sleep_stage)                                                                                               \
  X(sleep_epoch_duration_s)                                                                                    \
  X(is_sleep)                                                                                                  \
  X(is_wake)                                                                                                   \
  X(is_rem)                                                                                                    \
  X(is_nrem)                                                                                                   \
  X(cap_a_overlap)                                                                                             \
  X(cap_subtype)                                                                                               \
  X(body_position)                                                                                             \
  X(previous_rhythm_class)                                                                                     \
  X(previous_stress_label)                                                                                     \
  X(previous_protocol_label_id)                                                                                \
  X(previous_activity_label)                                                                                   \
  X(previous_sleep_stage)                                                                                      \
  X(previous_body_position)                                                                                    \
  X(af_burden_ratio)                                                                                           \
  X(af_episode_duration_s)                                                                                     \
  X(rhythm_transition_count)                                                                                   \
  X(rhythm_transition_count_per_hour)                                                                          \
  X(stress_burden_ratio)                                                                                       \
  X(stress_duration_s)                                                                                         \
  X(dominant_stress_label)                                                                                     \
  X(stress_transition_count)                                                                                   \
  X(stress_transition_count_per_hour)                                                                          \
  X(cap_a_count_window)                                                                                        \
  X(cap_a_total_duration_s_window)                                                                             \
  X(cap_a_count_5min)                                                                                          \
  X(cap_a_total_duration_s_5min)

// Nullable visible fields; the required ones are handled by hand.
#define VITAL_OPTIONAL_VISIBLE_FIELDS(X)                                                                       \
  X(subject_id)                                                                                                \
  X(recording_id)                                                                                              \
  X(recording_duration_s)                                                                                      \
  X(hr_bpm)                                                                                                    \
  X(mean_hr_bpm)                                                                                               \
  X(max_hr_bpm)                                                                                                \
  X(previous_hr_bpm)                                                                                           \
  X(baseline_resting_hr)                                                                                       \
  X(hr_deviation_from_baseline)                                                                                \
  X(sdnn_ms)                                                                                                   \
  X(rmssd_ms)                                                                                                  \
  X(signal_quality_score)                                                                                      \
  X(motion_level)                                                                                              \
  X(mean_hr_5min)                                                                                              \
  X(tachycardia_ratio_5min)                                                                                    \
  X(alert_rule)                                                                                                \
  X(alert_reason)                                                                                              \
  X(urgency)

namespace {

#define VITAL_NAME(f) std::string_view(#f),
constexpr std::array kHiddenNames{VITAL_HIDDEN_FIELDS(VITAL_NAME)};
constexpr std::array kVisibleNames{std::string_view("state_id"),
                                   std::string_view("patient_id"),
                                   std::string_view("dataset"),
                                   std::string_view("modality"),
                                   std::string_view("window_index"),
                                   std::string_view("window_start_s"),
                                   std::string_view("window_end_s"),
                                   std::string_view("window_duration_s"),
                                   std::string_view("alert_triggered"),
                                   std::string_view("metadata"),
                                   std::string_view("dataset_specific"),
                                   VITAL_OPTIONAL_VISIBLE_FIELDS(VITAL_NAME)};
#undef VITAL_NAME

template <typename T>
void read_optional(const nlohmann::json& j, const char* key, std::optional<T>& out) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    out.reset();
  } else {
    out = it->get<T>();
  }
}

template <typename T>
T read_required(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) throw ParseError(std::string("state: missing required field '") + key + "'");
  return it->get<T>();
}

nlohmann::json strip_hidden_keys(const nlohmann::json& obj) {
  if (!obj.is_object()) return obj;
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, v] : obj.items()) {
    if (!is_hidden_field(k)) out[k] = v;
  }
  return out;
}

}  // namespace

std::string_view to_string(AlertRule r) {
  switch (r) {
    case AlertRule::extreme_bradycardia: return "extreme_bradycardia";
    case AlertRule::extreme_tachycardia: return "extreme_tachycardia";
    case AlertRule::sustained_tachycardia: return "sustained_tachycardia";
    case AlertRule::judge_intervention: return "judge_intervention";
  }
  return "judge_intervention";
}

AlertRule parse_alert_rule(std::string_view s) {
  for (auto r : {AlertRule::extreme_bradycardia, AlertRule::extreme_tachycardia, AlertRule::sustained_tachycardia,
                 AlertRule::judge_intervention}) {
    if (to_string(r) == s) return r;
  }
  throw ParseError("unknown alert rule: " + std::string(s));
}

std::string_view to_string(Urgency u) {
  switch (u) {
    case Urgency::none: return "none";
    case Urgency::low: return "low";
    case Urgency::medium: return "medium";
    case Urgency::high: return "high";
    case Urgency::critical: return "critical";
  }
  return "none";
}

Urgency parse_urgency(std::string_view s) {
  for (auto u : {Urgency::none, Urgency::low, Urgency::medium, Urgency::high, Urgency::critical}) {
    if (to_string(u) == s) return u;
  }
  throw ParseError("unknown urgency: " + std::string(s));
}

void to_json(nlohmann::json& j, AlertRule r) { j = std::string(to_string(r)); }
void from_json(const nlohmann::json& j, AlertRule& r) { r = parse_alert_rule(j.get<std::string>()); }
void to_json(nlohmann::json& j, Urgency u) { j = std::string(to_string(u)); }
void from_json(const nlohmann::json& j, Urgency& u) { u = parse_urgency(j.get<std::string>()); }

void to_json(nlohmann::json& j, const HiddenAnnotations& h) {
  j = nlohmann::json::object();
#define VITAL_PUT(f) j[#f] = h.f;
  VITAL_HIDDEN_FIELDS(VITAL_PUT)
#undef VITAL_PUT
}

void from_json(const nlohmann::json& j, HiddenAnnotations& h) {
#define VITAL_GET(f) read_optional(j, #f, h.f);
  VITAL_HIDDEN_FIELDS(VITAL_GET)
#undef VITAL_GET
}

std::span<const std::string_view> hidden_field_names() { return kHiddenNames; }

bool is_hidden_field(std::string_view name) {
  return std::find(kHiddenNames.begin(), kHiddenNames.end(), name) != kHiddenNames.end();
}

void to_json(nlohmann::json& j, const MonitoringState& s) {
  j = nlohmann::json::object();
  j["state_id"] = s.state_id;
  j["patient_id"] = s.patient_id;
  j["dataset"] = s.dataset;
  j["modality"] = s.modality;
  j["window_index"] = s.window_index;
  j["window_start_s"] = s.window_start_s;
  j["window_end_s"] = s.window_end_s;
  j["window_duration_s"] = s.window_duration_s;
  j["alert_triggered"] = s.alert_triggered;
  j["metadata"] = s.metadata;
  j["dataset_specific"] = s.dataset_specific;
#define VITAL_PUT(f) j[#f] = s.f;
  VITAL_OPTIONAL_VISIBLE_FIELDS(VITAL_PUT)
#undef VITAL_PUT
  if (s.hidden) {
    nlohmann::json h = *s.hidden;
    j.update(h);
  }
}

void from_json(const nlohmann::json& j, MonitoringState& s) {
  if (!j.is_object()) throw ParseError("state record must be an object");
  bool any_hidden = false;
  for (const auto& [k, v] : j.items()) {
    if (is_hidden_field(k)) {
      any_hidden = true;
    } else if (std::find(kVisibleNames.begin(), kVisibleNames.end(), k) == kVisibleNames.end()) {
      throw ParseError("state: unexpected field '" + k + "'");
    }
  }
  MonitoringState out;
  out.state_id = read_required<std::string>(j, "state_id");
  out.patient_id = read_required<std::string>(j, "patient_id");
  out.dataset = read_required<Dataset>(j, "dataset");
  out.modality = read_required<Modality>(j, "modality");
  out.window_index = read_required<std::int64_t>(j, "window_index");
  out.window_start_s = read_required<double>(j, "window_start_s");
  out.window_end_s = read_required<double>(j, "window_end_s");
  out.window_duration_s = read_required<double>(j, "window_duration_s");
  out.alert_triggered = read_required<bool>(j, "alert_triggered");
  out.metadata = j.value("metadata", nlohmann::json::object());
  out.dataset_specific = j.value("dataset_specific", nlohmann::json::object());
#define VITAL_GET(f) read_optional(j, #f, out.f);
  VITAL_OPTIONAL_VISIBLE_FIELDS(VITAL_GET)
#undef VITAL_GET
  if (any_hidden) out.hidden = j.get<HiddenAnnotations>();
  s = std::move(out);
}

void validate_state(const MonitoringState& s) {
  if (s.window_index < 0) throw IntegrityError("state: negative window_index");
  if (!(s.window_duration_s > 0.0)) throw IntegrityError("state: window_duration_s must be > 0");
  if (std::abs(s.window_end_s - (s.window_start_s + s.window_duration_s)) > 1e-6) {
    throw IntegrityError("state: window_end_s != window_start_s + window_duration_s");
  }
  if (!s.alert_triggered && (s.alert_rule || s.alert_reason || s.urgency)) {
    throw IntegrityError("state: alert fields set without alert_triggered");
  }
  if (!s.metadata.is_object() || !s.dataset_specific.is_object()) {
    throw IntegrityError("state: metadata and dataset_specific must be objects");
  }
}

MonitoringState leakage_filter(const MonitoringState& s) {
  MonitoringState out = s;
  out.hidden.reset();
  out.metadata = strip_hidden_keys(s.metadata);
  out.dataset_specific = strip_hidden_keys(s.dataset_specific);
  return out;
}

nlohmann::json leakage_filter(const nlohmann::json& record) {
  if (!record.is_object()) return record;
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, v] : record.items()) {
    if (is_hidden_field(k)) continue;
    out[k] = (k == "metadata" || k == "dataset_specific") ? strip_hidden_keys(v) : v;
  }
  return out;
}

void to_json(nlohmann::json& j, const AlertRecord& a) {
  j = {{"patient_id", a.patient_id}, {"window_index", a.window_index}, {"time_s", a.time_s},
       {"fired_rule", a.fired_rule}, {"urgency", a.urgency},           {"reason", a.reason},
       {"advice", a.advice},         {"cited_sections", a.cited_sections}};
}

void from_json(const nlohmann::json& j, AlertRecord& a) {
  if (!j.is_object()) throw ParseError("alert record must be an object");
  AlertRecord out;
  out.patient_id = j.at("patient_id").get<std::string>();
  out.window_index = j.at("window_index").get<std::int64_t>();
  out.time_s = j.at("time_s").get<double>();
  out.fired_rule = j.at("fired_rule").get<AlertRule>();
  out.urgency = j.at("urgency").get<Urgency>();
  if (out.urgency == Urgency::none) throw ParseError("alert record: urgency 'none' is not an alert");
  out.reason = j.value("reason", std::string());
  out.advice = j.value("advice", std::string());
  out.cited_sections = j.value("cited_sections", std::vector<GuidelineRef>{});
  a = std::move(out);
}

}  // namespace vital
