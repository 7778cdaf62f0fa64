#include "vital/query.hpp"

#include <algorithm>

#include "vital/error.hpp"

namespace vital {

std::string_view to_string(Tier t) { return t == Tier::A ? "A" : "B"; }

Tier parse_tier(std::string_view s) {
  if (s == "A" || s == "a") return Tier::A;
  if (s == "B" || s == "b") return Tier::B;
  throw ConfigError("unknown tier: " + std::string(s));
}

std::string_view to_string(QType q) {
  switch (q) {
    case QType::single_verify: return "single_verify";
    case QType::single_choose: return "single_choose";
    case QType::single_query: return "single_query";
  }
  return "single_query";
}

QType parse_qtype(std::string_view s) {
  if (s == "single_verify" || s == "V") return QType::single_verify;
  if (s == "single_choose" || s == "C") return QType::single_choose;
  if (s == "single_query" || s == "Q") return QType::single_query;
  throw ConfigError("unknown qtype: " + std::string(s));
}

void to_json(nlohmann::json& j, const WindowLocator& l) {
  j = {{"dataset", l.dataset},
       {"patient_id", l.patient_id},
       {"window_start_s", l.window_start_s},
       {"window_end_s", l.window_end_s}};
}

void from_json(const nlohmann::json& j, WindowLocator& l) {
  j.at("dataset").get_to(l.dataset);
  j.at("patient_id").get_to(l.patient_id);
  j.at("window_start_s").get_to(l.window_start_s);
  j.at("window_end_s").get_to(l.window_end_s);
  if (!(l.window_end_s > l.window_start_s)) throw ConfigError("locator window_end_s must exceed window_start_s");
}

const std::vector<std::string>& known_targets() {
  static const std::vector<std::string> all{
      std::string(targets::hr_current),          std::string(targets::sdnn_current),
      std::string(targets::tachycardia_current), std::string(targets::hr_category_current),
      std::string(targets::af_presence_current), std::string(targets::af_burden),
      std::string(targets::af_any),              std::string(targets::max_hr),
      std::string(targets::mean_hr),             std::string(targets::hr_increase)};
  return all;
}

namespace {

bool has_any(const std::string& text, std::initializer_list<std::string_view> words) {
  return std::any_of(words.begin(), words.end(),
                     [&](std::string_view w) { return text.find(w) != std::string::npos; });
}

}  // namespace

std::optional<std::string> infer_target(std::string_view question) {
  const std::string t = " " + normalize_text(question) + " ";
  const bool af = has_any(t, {"atrial fibrillation", " af ", " af?", " afib"});
  if (af && has_any(t, {"burden", "how often", "how much of", "fraction", "proportion"})) {
    return std::string(targets::af_burden);
  }
  if (af && has_any(t, {" any ", "at any point", "ever", "at some point"})) return std::string(targets::af_any);
  if (af) return std::string(targets::af_presence_current);
  if (has_any(t, {"maximum", " max ", "highest", "peak"})) return std::string(targets::max_hr);
  if (has_any(t, {"average", " mean "})) return std::string(targets::mean_hr);
  if (has_any(t, {"increase", " rise", "go up", "went up"})) return std::string(targets::hr_increase);
  if (has_any(t, {"sdnn", "variability", " hrv", " prv"})) return std::string(targets::sdnn_current);
  if (has_any(t, {"category", "classif", "which range"})) return std::string(targets::hr_category_current);
  if (has_any(t, {"tachycardi"})) return std::string(targets::tachycardia_current);
  if (has_any(t, {"heart rate", "pulse rate", " pulse", " bpm"})) return std::string(targets::hr_current);
  return std::nullopt;
}

void Query::validate() const {
  if (qtype == QType::single_choose && options.empty()) throw ConfigError("single_choose query needs options");
}

void to_json(nlohmann::json& j, const Query& q) {
  j = {{"text", q.text}};
  if (q.locator) j["locator"] = *q.locator;
  if (q.tier) j["tier"] = std::string(to_string(*q.tier));
  if (q.qtype) j["qtype"] = std::string(to_string(*q.qtype));
  if (!q.options.empty()) j["options"] = q.options;
  if (q.target) j["target"] = *q.target;
}

void from_json(const nlohmann::json& j, Query& q) {
  q = {};
  j.at("text").get_to(q.text);
  if (j.contains("locator") && !j["locator"].is_null()) q.locator = j["locator"].get<WindowLocator>();
  if (j.contains("tier") && !j["tier"].is_null()) q.tier = parse_tier(j["tier"].get<std::string>());
  if (j.contains("qtype") && !j["qtype"].is_null()) q.qtype = parse_qtype(j["qtype"].get<std::string>());
  if (j.contains("options") && !j["options"].is_null()) j["options"].get_to(q.options);
  if (j.contains("target") && !j["target"].is_null()) q.target = j["target"].get<std::string>();
  q.validate();
}

}  // namespace vital
