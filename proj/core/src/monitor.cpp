#include "vital/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vital/error.hpp"

namespace vital {

namespace {

double overlap(double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); }

std::string screen_of(const MonitoringState& s) { return s.metadata.value("screen_rhythm", std::string()); }

}  // namespace

nlohmann::json MonitorConfig::header() const {
  return {{"rules", rules}, {"screen", screen}, {"judge_enabled", judge_enabled},
          {"judge_max_tool_calls", judge.max_tool_calls}, {"rr_band", {band.min_s, band.max_s}}};
}

MonitorSession::MonitorSession(std::string patient_id, MonitorConfig cfg, const GuidelineStore* guidelines,
                               CompletionClient* judge_backend)
    : cfg_(std::move(cfg)),
      guidelines_(guidelines),
      judge_backend_(judge_backend),
      memory_(std::move(patient_id), cfg_.memory) {
  cfg_.screen.validate();
  cfg_.rules.validate();
  if (cfg_.judge_enabled && (!guidelines_ || !judge_backend_)) {
    throw ConfigError("monitor: judge enabled without a guideline store and backend");
  }
}

void MonitorSession::set_reference(std::vector<Annotation> annotations) {
  std::sort(annotations.begin(), annotations.end(),
            [](const Annotation& a, const Annotation& b) { return a.start_s < b.start_s; });
  reference_ = std::move(annotations);
  has_reference_ = true;
}

std::optional<HiddenAnnotations> MonitorSession::reference_block(const SampleWindow& w) const {
  if (!has_reference_) return std::nullopt;
  const double t0 = w.start_s;
  const double t1 = w.end_s();
  HiddenAnnotations h;
  double af = 0.0;
  std::optional<double> af_onset;
  for (const auto& a : reference_) {
    if (a.label != "AF") continue;
    const double ov = overlap(t0, t1, a.start_s, a.end_s);
    af += ov;
    if (ov > 0.0 && a.start_s <= t0 + 0.5 * w.duration_s) af_onset = a.start_s;
  }
  h.af_burden_ratio = af / w.duration_s;
  h.rhythm_class = *h.af_burden_ratio > 0.5 ? "AF" : "N";
  if (*h.rhythm_class == "AF" && af_onset) h.af_episode_duration_s = t1 - *af_onset;

  const MonitoringState* prev = memory_.states().empty() ? nullptr : &memory_.states().back();
  std::int64_t transitions = 0;
  if (prev && prev->hidden) {
    h.previous_rhythm_class = prev->hidden->rhythm_class;
    transitions = prev->hidden->rhythm_transition_count.value_or(0);
    if (h.previous_rhythm_class && *h.previous_rhythm_class != *h.rhythm_class) ++transitions;
  }
  h.rhythm_transition_count = transitions;
  if (t1 > 0.0) h.rhythm_transition_count_per_hour = static_cast<double>(transitions) * 3600.0 / t1;
  return h;
}

JudgeSnapshot MonitorSession::make_snapshot(const MonitoringState& state, RhythmClass screen,
                                            const TrailingView& tv) const {
  JudgeSnapshot s;
  s.hr_bpm = state.hr_bpm;
  if (screen != RhythmClass::unknown) s.rhythm_class = std::string(to_string(screen));
  if (screen == RhythmClass::AF) {
    std::size_t run = 1;
    for (auto it = memory_.states().rbegin(); it != memory_.states().rend() && screen_of(*it) == "AF"; ++it) ++run;
    s.af_episode_duration_s = static_cast<double>(run) * state.window_duration_s;
  }
  s.tachycardia_ratio_5min = tv.tachycardia_ratio_5min;
  s.tachycardia_sample_count = tv.tachycardia_sample_count;
  return s;
}

WindowResult MonitorSession::process_window(const SampleWindow& w) {
  validate_window(w);
  if (w.patient_id != memory_.patient_id()) {
    throw OrderingError("monitor: window for '" + w.patient_id + "' sent to '" + memory_.patient_id() + "'");
  }
  if (!memory_.empty()) {
    const auto& last = memory_.states().back();
    if (w.window_index != last.window_index + 1 || std::abs(w.start_s - last.window_end_s) > 1e-6) {
      throw OrderingError("monitor: window " + std::to_string(w.window_index) + " does not follow window " +
                          std::to_string(last.window_index));
    }
  }

  const EntropyBinning binning{cfg_.screen.entropy_bins, 0.6};
  const WindowAnalysis an = analyze_window(w, cfg_.detector, cfg_.band, binning);

  // Rhythm context: the window itself when long enough, otherwise the
  // concatenated in-band RR of the trailing context_s seconds.
  WindowFeatures ctx = an.features;
  if (w.duration_s < cfg_.screen.context_s) {
    std::vector<double> rr;
    for (const auto& r : recent_rr_) {
      if (w.end_s() - r.end_s < cfg_.screen.context_s - 1e-9) rr.insert(rr.end(), r.rr_s.begin(), r.rr_s.end());
    }
    rr.insert(rr.end(), an.rr.rr_s.begin(), an.rr.rr_s.end());
    RRSeries series = rr_from_intervals(rr);
    ctx = compute_features(series, an.features.signal_quality_score, binning);
  }
  WindowResult out;
  out.rhythm = classify_rhythm(ctx, cfg_.screen);

  MonitoringState& s = out.state;
  s.state_id = w.patient_id + ":" + std::to_string(w.window_index);
  s.patient_id = w.patient_id;
  s.subject_id = w.patient_id;
  s.dataset = w.dataset;
  s.modality = w.modality;
  s.window_index = w.window_index;
  s.window_start_s = w.start_s;
  s.window_end_s = w.end_s();
  s.window_duration_s = w.duration_s;
  s.hr_bpm = an.features.hr_bpm;
  if (!an.rr.rr_s.empty()) {
    double acc = 0.0;
    for (double r : an.rr.rr_s) acc += 60.0 / r;
    s.mean_hr_bpm = acc / static_cast<double>(an.rr.rr_s.size());
  }
  s.sdnn_ms = an.features.sdnn_ms;
  s.rmssd_ms = an.features.rmssd_ms;
  s.signal_quality_score = an.features.signal_quality_score;
  s.metadata = {{"screen_rhythm", to_string(out.rhythm.rhythm_class)},
                {"n_beats", an.features.n_beats},
                {"rr_excluded", an.rr.excluded},
                {"quality_flag", to_string(an.peaks.quality)}};
  s.hidden = reference_block(w);

  const TrailingView tv = memory_.trailing_with(s);
  const std::vector<AlertRule> fired = evaluate_rules(s, tv, cfg_.rules);
  nlohmann::json fired_names = nlohmann::json::array();
  for (AlertRule r : fired) fired_names.push_back(to_string(r));
  s.metadata[kRulesFiredKey] = fired_names;

  auto make_alert = [&](AlertRule r, Urgency u, std::string reason, std::string advice,
                        std::vector<GuidelineRef> cites) {
    return AlertRecord{w.patient_id, w.window_index, w.end_s(), r, u, std::move(reason), std::move(advice),
                       std::move(cites)};
  };
  for (AlertRule r : fired) {
    if (should_emit(r, memory_)) {
      out.alerts.push_back(make_alert(r, rule_urgency(r), rule_reason(r, s, tv),
                                      "Consider consulting a healthcare professional.", {}));
    }
  }

  if (cfg_.judge_enabled && (w.window_index + 1) % cfg_.rules.judge_period_windows == 0) {
    out.snapshot = make_snapshot(s, out.rhythm.rhythm_class, tv);
    out.judge = judge_checkpoint(*out.snapshot, *guidelines_, *judge_backend_, cfg_.judge);
    const JudgeDecision& d = out.judge->decision;
    s.metadata[kJudgeKey] = {{"intervene", d.intervene}, {"urgency", d.urgency}, {"diagnostics", out.judge->diagnostics}};
    if (d.intervene && should_emit(AlertRule::judge_intervention, memory_)) {
      out.alerts.push_back(make_alert(AlertRule::judge_intervention, d.urgency, d.reason, d.advice, d.cited_sections));
    }
  }

  if (!out.alerts.empty()) {
    const AlertRecord& first = out.alerts.front();
    s.alert_triggered = true;
    s.alert_rule = std::string(to_string(first.fired_rule));
    s.alert_reason = first.reason;
    s.urgency = std::string(to_string(first.urgency));
  }

  out.state = memory_.update(std::move(s), out.alerts);
  memory_.remember_window(w);
  recent_rr_.push_back({w.end_s(), an.rr.rr_s});
  while (!recent_rr_.empty() && w.end_s() - recent_rr_.front().end_s >= cfg_.screen.context_s) recent_rr_.pop_front();
  return out;
}

MonitorRun run_monitor(std::span<const SampleWindow> windows, const MonitorConfig& cfg,
                       const GuidelineStore* guidelines, CompletionClient* judge_backend,
                       const std::map<std::string, std::vector<Annotation>>& reference) {
  std::map<std::string, std::vector<const SampleWindow*>> by_patient;
  for (const auto& w : windows) by_patient[w.patient_id].push_back(&w);
  MonitorRun run;
  for (const auto& [pid, ws] : by_patient) {
    MonitorSession session(pid, cfg, guidelines, judge_backend);
    if (auto it = reference.find(pid); it != reference.end()) session.set_reference(it->second);
    for (const SampleWindow* w : ws) {
      auto r = session.process_window(*w);
      if (r.judge) ++run.judge_calls;
    }
    run.patients.emplace(pid, session.memory());
  }
  return run;
}

void write_monitor_run(const MonitorRun& run, const std::filesystem::path& dir, const MonitorConfig& cfg, bool fair) {
  for (const auto& [pid, mem] : run.patients) {
    mem.persist(dir / pid, {fair, cfg.header()});
  }
}

}  // namespace vital
