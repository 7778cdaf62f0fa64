#include "vital/proactive_eval.hpp"

#include <algorithm>
#include <map>

#include "vital/error.hpp"
#include "vital/jsonl.hpp"

namespace vital {

using nlohmann::json;

void to_json(json& j, const EpisodeAnnotation& e) {
  j = {{"patient_id", e.patient_id}, {"onset_s", e.onset_s}, {"offset_s", e.offset_s}, {"label", e.label}};
}

void from_json(const json& j, EpisodeAnnotation& e) {
  j.at("patient_id").get_to(e.patient_id);
  j.at("onset_s").get_to(e.onset_s);
  j.at("offset_s").get_to(e.offset_s);
  j.at("label").get_to(e.label);
}

void validate_episodes(std::span<const EpisodeAnnotation> episodes) {
  std::map<std::string, std::vector<const EpisodeAnnotation*>> by_patient;
  for (const auto& e : episodes) {
    if (!(e.onset_s < e.offset_s)) throw IntegrityError("episode onset must precede offset");
    by_patient[e.patient_id].push_back(&e);
  }
  for (auto& [pid, es] : by_patient) {
    std::sort(es.begin(), es.end(), [](auto* a, auto* b) { return a->onset_s < b->onset_s; });
    for (std::size_t i = 1; i < es.size(); ++i) {
      if (es[i]->onset_s < es[i - 1]->offset_s) throw IntegrityError("overlapping episodes for patient " + pid);
    }
  }
}

std::vector<EpisodeAnnotation> episodes_from_annotations(const std::string& patient_id,
                                                         std::span<const Annotation> annotations) {
  std::vector<Annotation> sorted(annotations.begin(), annotations.end());
  std::sort(sorted.begin(), sorted.end(), [](const Annotation& a, const Annotation& b) { return a.start_s < b.start_s; });
  std::vector<EpisodeAnnotation> out;
  for (const auto& a : sorted) {
    std::string label = normalize_text(a.label);
    if (label == "normal" || label == "n") continue;
    if (label == "af" || label == "afib") label = "AF";
    if (!out.empty() && out.back().label == label && a.start_s <= out.back().offset_s + 1e-9) {
      out.back().offset_s = std::max(out.back().offset_s, a.end_s);
      continue;
    }
    out.push_back({patient_id, a.start_s, a.end_s, label});
  }
  return out;
}

std::vector<EpisodeAnnotation> read_episodes(const std::filesystem::path& path, const std::string& default_patient) {
  std::vector<EpisodeAnnotation> episodes;
  std::map<std::string, std::vector<Annotation>> bare;
  std::size_t line = 0;
  for (const auto& j : read_jsonl(path)) {
    ++line;
    try {
      if (j.contains("onset_s")) {
        episodes.push_back(j.get<EpisodeAnnotation>());
      } else {
        const std::string pid = j.value("patient_id", default_patient);
        if (pid.empty()) throw ConfigError("annotation without patient_id and no default patient");
        bare[pid].push_back(j.get<Annotation>());
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(path.string() + ": " + e.what(), line);
    }
  }
  for (const auto& [pid, anns] : bare) {
    auto eps = episodes_from_annotations(pid, anns);
    episodes.insert(episodes.end(), eps.begin(), eps.end());
  }
  validate_episodes(episodes);
  return episodes;
}

void to_json(json& j, const ProactiveReport& r) {
  json eps = json::array();
  for (const auto& o : r.episodes) {
    json e = o.episode;
    e["latency_s"] = o.latency_s;
    e["matched"] = o.latency_s.has_value();
    eps.push_back(std::move(e));
  }
  j = {{"total_alerts", r.total_alerts},
       {"matched_alerts", r.matched_alerts},
       {"false_alerts", r.false_alerts},
       {"matched_episodes", r.matched_episodes},
       {"missed_episodes", r.missed_episodes},
       {"monitored_hours", r.monitored_hours},
       {"far_per_hour", r.far_per_hour},
       {"latency_median_s", r.latency_median_s},
       {"episodes", eps},
       {"config", {{"grace_s", r.config.grace_s}}}};
}

ProactiveReport eval_proactive(std::span<const AlertRecord> alerts, std::span<const EpisodeAnnotation> episodes,
                               double monitored_hours, const ProactiveEvalConfig& cfg) {
  if (!(monitored_hours > 0.0)) throw ConfigError("monitored_hours must be positive");
  if (cfg.grace_s < 0.0) throw ConfigError("grace_s must be non-negative");
  validate_episodes(episodes);
  ProactiveReport r;
  r.config = cfg;
  r.monitored_hours = monitored_hours;
  r.total_alerts = alerts.size();
  for (const auto& e : episodes) r.episodes.push_back({e, std::nullopt});
  std::sort(r.episodes.begin(), r.episodes.end(), [](const EpisodeOutcome& a, const EpisodeOutcome& b) {
    return std::tie(a.episode.patient_id, a.episode.onset_s) < std::tie(b.episode.patient_id, b.episode.onset_s);
  });
  for (const auto& a : alerts) {
    bool matched = false;
    for (auto& o : r.episodes) {
      const auto& e = o.episode;
      if (e.patient_id != a.patient_id || a.time_s < e.onset_s || a.time_s > e.offset_s + cfg.grace_s) continue;
      matched = true;
      const double lat = a.time_s - e.onset_s;
      if (!o.latency_s || lat < *o.latency_s) o.latency_s = lat;
      break;
    }
    ++(matched ? r.matched_alerts : r.false_alerts);
  }
  std::vector<double> lats;
  for (const auto& o : r.episodes) {
    if (o.latency_s) {
      ++r.matched_episodes;
      lats.push_back(*o.latency_s);
    } else {
      ++r.missed_episodes;
    }
  }
  if (!lats.empty()) {
    std::sort(lats.begin(), lats.end());
    const std::size_t n = lats.size();
    r.latency_median_s = n % 2 ? lats[n / 2] : 0.5 * (lats[n / 2 - 1] + lats[n / 2]);
  }
  r.far_per_hour = static_cast<double>(r.false_alerts) / monitored_hours;
  return r;
}

void to_json(json& j, const RhythmReport& r) {
  j = {{"tp", r.tp},
       {"fp", r.fp},
       {"tn", r.tn},
       {"fn", r.fn},
       {"sensitivity", r.sensitivity},
       {"specificity", r.specificity},
       {"balanced_accuracy", r.balanced_accuracy}};
}

RhythmReport eval_rhythm(std::span<const std::string> predicted, std::span<const std::string> truth) {
  if (predicted.size() != truth.size()) throw IntegrityError("rhythm predictions and labels are not aligned");
  RhythmReport r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] == "AF";
    const bool t = truth[i] == "AF";
    if (t) {
      ++(p ? r.tp : r.fn);
    } else {
      ++(p ? r.fp : r.tn);
    }
  }
  if (r.tp + r.fn) r.sensitivity = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  if (r.tn + r.fp) r.specificity = static_cast<double>(r.tn) / static_cast<double>(r.tn + r.fp);
  if (r.sensitivity && r.specificity) r.balanced_accuracy = 0.5 * (*r.sensitivity + *r.specificity);
  return r;
}

std::pair<std::vector<std::string>, std::vector<std::string>> rhythm_pairs(std::span<const MonitoringState> states) {
  std::pair<std::vector<std::string>, std::vector<std::string>> out;
  for (const auto& s : states) {
    if (!s.hidden || !s.hidden->rhythm_class) continue;
    const auto it = s.metadata.find("screen_rhythm");
    if (it == s.metadata.end() || !it->is_string()) continue;
    out.first.push_back(it->get<std::string>());
    out.second.push_back(*s.hidden->rhythm_class);
  }
  return out;
}

}  // namespace vital
