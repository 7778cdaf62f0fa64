#include "vital/builtin_tools.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vital/error.hpp"
#include "vital/knowledge.hpp"
#include "vital/memory.hpp"
#include "vital/monitor.hpp"

namespace vital {

namespace {

using nlohmann::json;

const MonitorConfig& monitor_cfg(const ToolContext& ctx) {
  static const MonitorConfig defaults;
  return ctx.monitor ? *ctx.monitor : defaults;
}

const WindowStore& window_store(const ToolContext& ctx) {
  if (!ctx.windows) throw std::runtime_error("no window store configured");
  return *ctx.windows;
}

const StateStore& state_store(const ToolContext& ctx) {
  if (!ctx.states) throw std::runtime_error("no state store configured");
  return *ctx.states;
}

const PatientMemory& patient_memory(const ToolContext& ctx, const std::string& pid) {
  if (!ctx.memories) throw std::runtime_error("no proactive memory loaded");
  auto it = ctx.memories->find(pid);
  if (it == ctx.memories->end()) throw std::runtime_error("no proactive memory for patient " + pid);
  return it->second;
}

std::vector<ArgSpec> locator_args(bool end_required = true) {
  return {{"dataset", ArgType::string, true, "source dataset"},
          {"patient_id", ArgType::string, true, "patient or subject identifier"},
          {"window_start_s", ArgType::number, true, "window start in seconds"},
          {"window_end_s", ArgType::number, end_required, "window end in seconds"}};
}

std::vector<ArgSpec> patient_args() {
  return {{"patient_id", ArgType::string, false, "patient identifier"},
          {"subject_id", ArgType::string, false, "alias of patient_id"},
          {"dataset", ArgType::string, false, "source dataset"},
          {"window_start_s", ArgType::number, false, "interval start in seconds"},
          {"window_end_s", ArgType::number, false, "interval end in seconds"}};
}

std::string patient_of(const json& args) {
  if (args.contains("patient_id") && args["patient_id"].is_string()) return args["patient_id"].get<std::string>();
  if (args.contains("subject_id") && args["subject_id"].is_string()) return args["subject_id"].get<std::string>();
  throw std::invalid_argument("patient_id or subject_id is required");
}

struct Span {
  Dataset dataset;
  std::string patient_id;
  double start_s;
  double end_s;
};

Span span_of(const json& args) {
  Span s{parse_dataset(args.at("dataset").get<std::string>()), args.at("patient_id").get<std::string>(),
         args.at("window_start_s").get<double>(), 0.0};
  s.end_s = args.contains("window_end_s") && !args["window_end_s"].is_null()
                ? args["window_end_s"].get<double>()
                : s.start_s + dataset_default_window_s(s.dataset);
  return s;
}

SampleWindow load_span(const ToolContext& ctx, const Span& s) {
  return window_store(ctx).extract(s.dataset, s.patient_id, s.start_s, s.end_s);
}

WindowAnalysis analyze_span(const ToolContext& ctx, const json& args) {
  const auto& cfg = monitor_cfg(ctx);
  return analyze_window(load_span(ctx, span_of(args)), cfg.detector, cfg.band,
                        {cfg.screen.entropy_bins, 0.6});
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json state_json(const MonitoringState& s) { return json(leakage_filter(s)); }

std::vector<MonitoringState> states_for(const ToolContext& ctx, const json& args) {
  const std::string pid = patient_of(args);
  const auto* all = state_store(ctx).states(pid);
  if (!all) throw std::runtime_error("no monitoring states for patient " + pid);
  const double t0 = args.value("window_start_s", -1e300);
  const double t1 = args.value("window_end_s", 1e300);
  return state_store(ctx).range(pid, t0, t1);
}

json hr_summary(const std::vector<MonitoringState>& ss) {
  json values = json::array();
  std::vector<double> hr;
  for (const auto& s : ss) {
    values.push_back(opt(s.hr_bpm));
    if (s.hr_bpm) hr.push_back(*s.hr_bpm);
  }
  json out = {{"hr_values", values}, {"n_states", ss.size()}};
  if (hr.empty()) {
    out["max_hr_bpm"] = nullptr;
    out["mean_hr_bpm"] = nullptr;
    out["first_hr_bpm"] = nullptr;
    out["last_hr_bpm"] = nullptr;
  } else {
    out["max_hr_bpm"] = *std::max_element(hr.begin(), hr.end());
    out["mean_hr_bpm"] = std::accumulate(hr.begin(), hr.end(), 0.0) / static_cast<double>(hr.size());
    out["first_hr_bpm"] = opt(ss.front().hr_bpm);
    out["last_hr_bpm"] = opt(ss.back().hr_bpm);
  }
  return out;
}

ToolDescriptor desc(std::string name, ToolCategory cat, std::string description, std::vector<ArgSpec> args,
                    OutputKind kind, std::vector<std::string> fields, bool benchmark_only = false) {
  return {std::move(name), cat, std::move(description), std::move(args), kind, std::move(fields), benchmark_only};
}

// ---- signal analysis ------------------------------------------------------

json heart_rate_payload(const WindowAnalysis& a, const char* key) {
  return {{key, opt(a.features.hr_bpm)},
          {"n_beats", a.features.n_beats},
          {"signal_quality_score", a.features.signal_quality_score}};
}

json variability_payload(const WindowAnalysis& a) {
  return {{"sdnn_ms", opt(a.features.sdnn_ms)},
          {"rmssd_ms", opt(a.features.rmssd_ms)},
          {"n_beats", a.features.n_beats},
          {"signal_quality_score", a.features.signal_quality_score}};
}

json quality_payload(const WindowAnalysis& a) {
  return {{"signal_quality_score", a.features.signal_quality_score},
          {"quality_flag", to_string(a.peaks.quality)},
          {"saturated_fraction", a.peaks.saturated_fraction},
          {"rr_excluded", a.rr.excluded}};
}

RhythmAssessment screen_span(const ToolContext& ctx, const Span& s) {
  const auto& store = window_store(ctx);
  const auto parts = store.range(s.dataset, s.patient_id, s.start_s, s.end_s);
  if (parts.size() == 1) return screen_stored_window(store, *parts.front(), monitor_cfg(ctx));
  // Arbitrary spans are screened as one block.
  const auto& cfg = monitor_cfg(ctx);
  const auto a = analyze_window(load_span(ctx, s), cfg.detector, cfg.band, {cfg.screen.entropy_bins, 0.6});
  return classify_rhythm(a.features, cfg.screen);
}

json rhythm_payload(const RhythmAssessment& r) {
  json j = r;
  j["af_detected"] = r.rhythm_class == RhythmClass::AF;
  return j;
}

void register_signal_tools(ToolRegistry& reg) {
  const auto sa = ToolCategory::signal_analysis;
  reg.register_tool(desc("analyze_heart_rate", sa, "Heart rate of an ECG window from detected R peaks.",
                         locator_args(), OutputKind::evidence, {"hr_bpm", "n_beats", "signal_quality_score"}),
                    [](const json& a, const ToolContext& c) { return heart_rate_payload(analyze_span(c, a), "hr_bpm"); });
  reg.register_tool(desc("analyze_pulse_rate", sa, "Pulse rate of a PPG window from detected pulse peaks.",
                         locator_args(), OutputKind::evidence, {"pulse_rate_bpm", "n_beats", "signal_quality_score"}),
                    [](const json& a, const ToolContext& c) {
                      return heart_rate_payload(analyze_span(c, a), "pulse_rate_bpm");
                    });
  reg.register_tool(desc("analyze_hrv", sa, "Time-domain heart-rate variability (SDNN, RMSSD) of an ECG window.",
                         locator_args(), OutputKind::evidence, {"sdnn_ms", "rmssd_ms", "n_beats"}),
                    [](const json& a, const ToolContext& c) { return variability_payload(analyze_span(c, a)); });
  reg.register_tool(desc("analyze_prv", sa, "Pulse-rate variability (SDNN, RMSSD) of a PPG window.", locator_args(),
                         OutputKind::evidence, {"sdnn_ms", "rmssd_ms", "n_beats"}),
                    [](const json& a, const ToolContext& c) { return variability_payload(analyze_span(c, a)); });
  reg.register_tool(desc("assess_signal_quality", sa, "Signal quality score and flag of an ECG window.",
                         locator_args(), OutputKind::evidence, {"signal_quality_score", "quality_flag"}),
                    [](const json& a, const ToolContext& c) { return quality_payload(analyze_span(c, a)); });
  reg.register_tool(desc("assess_ppg_signal_quality", sa, "Signal quality score and flag of a PPG window.",
                         locator_args(), OutputKind::evidence, {"signal_quality_score", "quality_flag"}),
                    [](const json& a, const ToolContext& c) { return quality_payload(analyze_span(c, a)); });
  reg.register_tool(desc("assess_all_leads_quality", sa,
                         "Per-lead quality; single-lead records report the one available lead.", locator_args(),
                         OutputKind::evidence, {"signal_quality_score", "quality_flag", "leads"}),
                    [](const json& a, const ToolContext& c) {
                      json j = quality_payload(analyze_span(c, a));
                      j["leads"] = json::array({{{"lead", "I"}, {"signal_quality_score", j["signal_quality_score"]}}});
                      return j;
                    });
  reg.register_tool(
      desc("analyze_ppg_rhythm_irregularity", sa,
           "RR irregularity features (CV, dRR entropy, turning-point ratio) and AF screen of a PPG window.",
           locator_args(), OutputKind::evidence, {"cv", "delta_rr_entropy", "turning_point_ratio", "af_detected"}),
      [](const json& a, const ToolContext& c) {
        const auto r = screen_span(c, span_of(a));
        json j = rhythm_payload(r);
        j["cv"] = opt(r.evidence.cv);
        j["delta_rr_entropy"] = opt(r.evidence.delta_rr_entropy);
        j["turning_point_ratio"] = opt(r.evidence.turning_point_ratio);
        return j;
      });
  for (const char* name : {"analyze_morphology", "analyze_lead_morphology"}) {
    reg.register_tool(desc(name, sa, "Waveform morphology summary backed by the single-lead quality path.",
                           locator_args(), OutputKind::evidence, {"evidence", "signal_quality_score"}),
                      [](const json& a, const ToolContext& c) {
                        const auto an = analyze_span(c, a);
                        return json{{"evidence", {{"quality_flag", to_string(an.peaks.quality)},
                                                  {"n_beats", an.features.n_beats},
                                                  {"morphology", "not assessed beyond signal quality"}}},
                                    {"signal_quality_score", an.features.signal_quality_score}};
                      });
  }
  reg.register_tool(desc("ecg_diagnosis", sa, "Rhythm screen (N / AF / Other) of an ECG window from RR features.",
                         locator_args(), OutputKind::evidence, {"rhythm_class", "af_detected", "evidence"}),
                    [](const json& a, const ToolContext& c) { return rhythm_payload(screen_span(c, span_of(a))); });
  reg.register_tool(
      desc("analyze_af_ppg_ecg_rhythm_context", sa,
           "Per-window rhythm screen across an interval with AF burden (fraction of windows screened AF).",
           locator_args(), OutputKind::evidence, {"af_burden", "af_windows", "total_windows", "af_detected"}),
      [](const json& a, const ToolContext& c) {
        const Span s = span_of(a);
        const auto& store = window_store(c);
        const auto parts = store.range(s.dataset, s.patient_id, s.start_s, s.end_s);
        if (parts.empty()) throw std::runtime_error("no stored windows in the requested interval");
        json per = json::array();
        std::size_t af = 0;
        for (const auto* w : parts) {
          const auto r = screen_stored_window(store, *w, monitor_cfg(c));
          if (r.rhythm_class == RhythmClass::AF) ++af;
          per.push_back({{"window_start_s", w->start_s}, {"rhythm_class", to_string(r.rhythm_class)}});
        }
        return json{{"af_burden", static_cast<double>(af) / static_cast<double>(parts.size())},
                    {"af_windows", af},
                    {"total_windows", parts.size()},
                    {"af_detected", af > 0},
                    {"windows", per}};
      });
  reg.register_tool(desc("classify_wesad_stress_state", sa,
                         "Threshold heuristic stress state (stress / baseline) from heart rate and RMSSD.",
                         locator_args(), OutputKind::evidence, {"stress_state", "hr_bpm", "rmssd_ms"}),
                    [](const json& a, const ToolContext& c) {
                      const auto an = analyze_span(c, a);
                      const auto& f = an.features;
                      std::string state = "unknown";
                      if (f.hr_bpm && f.rmssd_ms) state = (*f.hr_bpm > 90.0 && *f.rmssd_ms < 30.0) ? "stress" : "baseline";
                      return json{{"stress_state", state}, {"hr_bpm", opt(f.hr_bpm)}, {"rmssd_ms", opt(f.rmssd_ms)}};
                    });
}

// ---- dataset processing ---------------------------------------------------

void register_dataset_tools(ToolRegistry& reg) {
  struct Loader {
    const char* name;
    const char* what;
  };
  for (const Loader& l : {Loader{"analyze_icentia11k_ecg_window_signal", "ECG (Icentia11k-style, 5-minute default)"},
                          Loader{"analyze_ppg_dalia_window_signal", "wrist PPG (PPG-DaLiA-style, 60 s default)"},
                          Loader{"analyze_wesad_window_signal", "wearable (WESAD-style, 60 s default)"}}) {
    reg.register_tool(desc(l.name, ToolCategory::dataset_processing,
                           std::string("Loads and summarizes one canonical ") + l.what + " window.",
                           locator_args(false), OutputKind::data,
                           {"patient_id", "modality", "fs", "n_samples", "window_start_s", "window_end_s"}),
                      [](const json& a, const ToolContext& c) {
                        const SampleWindow w = load_span(c, span_of(a));
                        const auto& cfg = monitor_cfg(c);
                        const auto an = analyze_window(w, cfg.detector, cfg.band, {cfg.screen.entropy_bins, 0.6});
                        return json{{"patient_id", w.patient_id},
                                    {"dataset", to_string(w.dataset)},
                                    {"modality", to_string(w.modality)},
                                    {"fs", w.fs},
                                    {"n_samples", w.samples.size()},
                                    {"window_start_s", w.start_s},
                                    {"window_end_s", w.end_s()},
                                    {"hr_bpm", opt(an.features.hr_bpm)},
                                    {"signal_quality_score", an.features.signal_quality_score}};
                      });
  }
}

// ---- record lookup --------------------------------------------------------

json record_list(const ToolContext& c, Modality m, const json& a) {
  std::optional<Dataset> ds;
  if (a.contains("dataset")) ds = parse_dataset(a["dataset"].get<std::string>());
  return {{"records", window_store(c).patients(ds, m)}};
}

json record_metadata(const ToolContext& c, const json& a) {
  const std::string pid = patient_of(a);
  const auto* ws = window_store(c).windows(pid);
  if (!ws || ws->empty()) throw std::runtime_error("no record for patient " + pid);
  return {{"patient_id", pid},
          {"dataset", to_string(ws->front().dataset)},
          {"modality", to_string(ws->front().modality)},
          {"fs", ws->front().fs},
          {"n_windows", ws->size()},
          {"window_duration_s", ws->front().duration_s},
          {"start_s", ws->front().start_s},
          {"duration_s", ws->back().end_s() - ws->front().start_s}};
}

void register_record_tools(ToolRegistry& reg) {
  const auto rl = ToolCategory::record_lookup;
  const std::vector<ArgSpec> list_args{{"dataset", ArgType::string, false, "restrict to one dataset"}};
  const std::vector<ArgSpec> rec_args{{"patient_id", ArgType::string, false, "patient identifier"},
                                      {"subject_id", ArgType::string, false, "alias of patient_id"}};
  reg.register_tool(desc("list_ecg_records", rl, "Lists patients with ECG windows in the local store.", list_args,
                         OutputKind::metadata, {"records"}),
                    [](const json& a, const ToolContext& c) { return record_list(c, Modality::ECG, a); });
  reg.register_tool(desc("list_ppg_records", rl, "Lists patients with PPG windows in the local store.", list_args,
                         OutputKind::metadata, {"records"}),
                    [](const json& a, const ToolContext& c) { return record_list(c, Modality::PPG, a); });
  reg.register_tool(desc("get_ecg_metadata", rl, "Sampling rate, window layout and span of an ECG record.", rec_args,
                         OutputKind::metadata, {"patient_id", "fs", "n_windows", "duration_s"}),
                    [](const json& a, const ToolContext& c) { return record_metadata(c, a); });
  reg.register_tool(desc("get_ppg_metadata", rl, "Sampling rate, window layout and span of a PPG record.", rec_args,
                         OutputKind::metadata, {"patient_id", "fs", "n_windows", "duration_s"}),
                    [](const json& a, const ToolContext& c) { return record_metadata(c, a); });
  for (const char* name : {"get_ecg_description", "get_ppg_description"}) {
    reg.register_tool(desc(name, rl, "Plain-text description of a record.", rec_args, OutputKind::metadata,
                           {"description"}),
                      [](const json& a, const ToolContext& c) {
                        const json m = record_metadata(c, a);
                        char buf[256];
                        std::snprintf(buf, sizeof buf, "%s record %s: %zu windows of %.0f s at %.0f Hz (%.0f s total).",
                                      m["modality"].get<std::string>().c_str(), m["patient_id"].get<std::string>().c_str(),
                                      m["n_windows"].get<std::size_t>(), m["window_duration_s"].get<double>(),
                                      m["fs"].get<double>(), m["duration_s"].get<double>());
                        return json{{"description", buf}, {"patient_id", m["patient_id"]}};
                      });
  }
}

// ---- proactive context ----------------------------------------------------

void register_proactive_tools(ToolRegistry& reg) {
  const auto pc = ToolCategory::proactive_context;
  const std::vector<ArgSpec> pid_arg{{"patient_id", ArgType::string, true, "patient identifier"}};
  reg.register_tool(desc("proactive_get_recent_alerts", pc, "Most recent alerts from the proactive memory, newest first.",
                         {{"patient_id", ArgType::string, true, "patient identifier"},
                          {"k", ArgType::integer, false, "number of alerts (default 5)"}},
                         OutputKind::state, {"patient_id", "alerts", "count"}),
                    [](const json& a, const ToolContext& c) {
                      const auto& m = patient_memory(c, a["patient_id"].get<std::string>());
                      const auto k = static_cast<std::size_t>(std::max<std::int64_t>(0, a.value("k", std::int64_t{5})));
                      const auto alerts = m.recent_alerts(k);
                      return json{{"patient_id", m.patient_id()}, {"alerts", alerts}, {"count", alerts.size()}};
                    });
  reg.register_tool(desc("proactive_explain_last_alert", pc, "Latest alert joined with the state of its window.",
                         pid_arg, OutputKind::explanation, {"alert", "state"}),
                    [](const json& a, const ToolContext& c) {
                      const auto& m = patient_memory(c, a["patient_id"].get<std::string>());
                      const auto e = m.explain_last_alert();
                      if (!e) return json{{"alert", nullptr}, {"state", nullptr}};
                      return json{{"alert", e->first}, {"state", state_json(e->second)}};
                    });
  reg.register_tool(desc("proactive_list_patient_contexts", pc, "Patients with a proactive monitoring memory.", {},
                         OutputKind::metadata, {"patients"}),
                    [](const json&, const ToolContext& c) {
                      json out = json::array();
                      if (c.memories) {
                        for (const auto& [pid, m] : *c.memories) {
                          out.push_back({{"patient_id", pid}, {"n_states", m.states().size()},
                                         {"n_alerts", m.alerts().size()}});
                        }
                      }
                      return json{{"patients", out}};
                    });
  reg.register_tool(desc("proactive_load_patient_context", pc, "Summary of one patient's proactive memory.", pid_arg,
                         OutputKind::state, {"patient_id", "n_states", "n_alerts", "last_state"}),
                    [](const json& a, const ToolContext& c) {
                      const auto& m = patient_memory(c, a["patient_id"].get<std::string>());
                      return json{{"patient_id", m.patient_id()},
                                  {"n_states", m.states().size()},
                                  {"n_alerts", m.alerts().size()},
                                  {"session_max_hr_bpm", opt(m.session_max_hr())},
                                  {"last_state", m.empty() ? json(nullptr) : state_json(m.states().back())}};
                    });
  reg.register_tool(desc("evaluate_proactive_rules", pc,
                         "Replays the rule layer (no judge) over the stored windows of an interval.", locator_args(),
                         OutputKind::evidence, {"fired_rules", "alerts", "n_windows"}),
                    [](const json& a, const ToolContext& c) {
                      const Span s = span_of(a);
                      const auto parts = window_store(c).range(s.dataset, s.patient_id, s.start_s, s.end_s);
                      MonitorConfig cfg = monitor_cfg(c);
                      cfg.judge_enabled = false;
                      MonitorSession session(s.patient_id, cfg);
                      std::vector<std::string> fired;
                      std::vector<AlertRecord> alerts;
                      std::int64_t i = 0;
                      for (const auto* w : parts) {
                        SampleWindow copy = *w;
                        copy.window_index = i++;
                        auto r = session.process_window(copy);
                        for (const auto& n : r.state.metadata[kRulesFiredKey]) {
                          const auto name = n.get<std::string>();
                          if (std::find(fired.begin(), fired.end(), name) == fired.end()) fired.push_back(name);
                        }
                        alerts.insert(alerts.end(), r.alerts.begin(), r.alerts.end());
                      }
                      return json{{"fired_rules", fired}, {"alerts", alerts}, {"n_windows", parts.size()}};
                    });
}

// ---- medical knowledge ----------------------------------------------------

void register_knowledge_tools(ToolRegistry& reg) {
  const std::vector<ArgSpec> args{{"query", ArgType::string, true, "search terms"},
                                  {"max_results", ArgType::integer, false, "result cap (default 3)"}};
  struct K {
    const char* name;
    const char* description;
    KnowledgeSource source;
  };
  for (const K& k : {K{"medical_info_search", "Patient-friendly health topics from MedlinePlus.",
                       KnowledgeSource::medlineplus},
                     K{"medical_knowledge", "Biomedical literature search on PubMed.", KnowledgeSource::pubmed}}) {
    const KnowledgeSource src = k.source;
    reg.register_tool(desc(k.name, ToolCategory::medical_knowledge, k.description, args, OutputKind::evidence,
                           {"source", "results"}),
                      [src](const json& a, const ToolContext& c) {
                        if (!c.knowledge) throw std::runtime_error("knowledge client not configured");
                        const int n = static_cast<int>(a.value("max_results", std::int64_t{3}));
                        const auto hits = c.knowledge->search(src, a["query"].get<std::string>(), n);
                        return json{{"source", src == KnowledgeSource::medlineplus ? "medlineplus" : "pubmed"},
                                    {"results", hits}};
                      });
  }
}

// ---- state construction and access ----------------------------------------

void register_state_tools(ToolRegistry& reg) {
  const auto st = ToolCategory::state_access;
  struct Builder {
    const char* name;
    const char* what;
  };
  for (const Builder& b : {Builder{"state_build_from_ecg_record", "an ECG record"},
                           Builder{"state_build_from_ppg_dalia_pickle", "a PPG-DaLiA-style record"},
                           Builder{"state_build_from_ppg_patient", "a PPG patient"},
                           Builder{"state_build_from_wesad_pickle", "a WESAD-style record"}}) {
    reg.register_tool(desc(b.name, st, std::string("Builds monitoring states from the stored windows of ") + b.what + ".",
                           {{"patient_id", ArgType::string, true, "patient identifier"}}, OutputKind::state,
                           {"patient_id", "n_states"}, true),
                      [](const json& a, const ToolContext& c) {
                        const std::string pid = a["patient_id"].get<std::string>();
                        const auto* ws = window_store(c).windows(pid);
                        if (!ws) throw std::runtime_error("no record for patient " + pid);
                        MonitorConfig cfg = monitor_cfg(c);
                        cfg.judge_enabled = false;
                        const MonitorRun run = run_monitor(*ws, cfg, nullptr, nullptr);
                        const auto& states = run.patients.at(pid).states();
                        if (c.scratch_states) c.scratch_states->put(pid, states);
                        return json{{"patient_id", pid}, {"n_states", states.size()}};
                      });
  }

  reg.register_tool(desc("state_get_current_monitoring_state", st, "Latest monitoring state inside an interval.",
                         patient_args(), OutputKind::state, {"state"}),
                    [](const json& a, const ToolContext& c) {
                      const auto ss = states_for(c, a);
                      return json{{"state", ss.empty() ? json(nullptr) : state_json(ss.back())}};
                    });
  reg.register_tool(desc("state_get_previous_monitoring_state", st,
                         "Monitoring state immediately before the interval start.", patient_args(), OutputKind::state,
                         {"state"}),
                    [](const json& a, const ToolContext& c) {
                      const std::string pid = patient_of(a);
                      const auto* all = state_store(c).states(pid);
                      if (!all) throw std::runtime_error("no monitoring states for patient " + pid);
                      const double t0 = a.value("window_start_s", 1e300);
                      const MonitoringState* prev = nullptr;
                      for (const auto& s : *all) {
                        if (s.window_end_s <= t0 + 1e-6) prev = &s;
                      }
                      return json{{"state", prev ? state_json(*prev) : json(nullptr)}};
                    });
  reg.register_tool(desc("state_get_dataset_capabilities", st, "Targets a dataset can answer and its window layout.",
                         {{"dataset", ArgType::string, true, "source dataset"}}, OutputKind::metadata,
                         {"dataset", "supported_targets", "modality"}),
                    [](const json& a, const ToolContext&) {
                      const Dataset d = parse_dataset(a["dataset"].get<std::string>());
                      return json{{"dataset", to_string(d)},
                                  {"modality", to_string(dataset_default_modality(d))},
                                  {"window_s", dataset_default_window_s(d)},
                                  {"supported_targets", dataset_supported_targets(d)}};
                    });
  reg.register_tool(desc("state_get_evidence", st, "Signal-derived fields of the states inside an interval.",
                         patient_args(), OutputKind::evidence, {"evidence"}),
                    [](const json& a, const ToolContext& c) {
                      json ev = json::array();
                      for (const auto& s : states_for(c, a)) {
                        ev.push_back({{"window_index", s.window_index},
                                      {"hr_bpm", opt(s.hr_bpm)},
                                      {"sdnn_ms", opt(s.sdnn_ms)},
                                      {"rmssd_ms", opt(s.rmssd_ms)},
                                      {"signal_quality_score", opt(s.signal_quality_score)}});
                      }
                      return json{{"evidence", ev}};
                    });
  reg.register_tool(desc("state_get_longitudinal_trend", st, "Least-squares heart-rate slope over an interval.",
                         patient_args(), OutputKind::evidence, {"trend", "n_states"}),
                    [](const json& a, const ToolContext& c) {
                      const auto ss = states_for(c, a);
                      std::vector<std::pair<double, double>> pts;
                      for (const auto& s : ss) {
                        if (s.hr_bpm) pts.emplace_back(s.window_end_s / 3600.0, *s.hr_bpm);
                      }
                      json trend = nullptr;
                      if (pts.size() >= 2) {
                        double mx = 0, my = 0;
                        for (auto [x, y] : pts) mx += x, my += y;
                        mx /= static_cast<double>(pts.size());
                        my /= static_cast<double>(pts.size());
                        double sxy = 0, sxx = 0;
                        for (auto [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
                        const double slope = sxx > 0 ? sxy / sxx : 0.0;
                        trend = {{"hr_slope_bpm_per_hour", slope},
                                 {"direction", slope > 1.0 ? "increasing" : slope < -1.0 ? "decreasing" : "stable"}};
                      }
                      return json{{"trend", trend}, {"n_states", ss.size()}};
                    });
  reg.register_tool(desc("state_get_monitoring_window", st,
                         "Visible monitoring states over a multi-window interval with heart-rate aggregates.",
                         patient_args(), OutputKind::state, {"states", "n_states", "hr_values"}),
                    [](const json& a, const ToolContext& c) {
                      const auto ss = states_for(c, a);
                      json j = hr_summary(ss);
                      json states = json::array();
                      for (const auto& s : ss) states.push_back(state_json(s));
                      j["states"] = states;
                      return j;
                    });
  reg.register_tool(desc("state_list_contexts", st, "Patients with monitoring states.", {}, OutputKind::metadata,
                         {"contexts"}),
                    [](const json&, const ToolContext& c) {
                      json out = json::array();
                      const auto& store = state_store(c);
                      for (const auto& pid : store.patients()) {
                        out.push_back({{"patient_id", pid}, {"n_states", store.states(pid)->size()}});
                      }
                      return json{{"contexts", out}};
                    });
  reg.register_tool(desc("state_load_monitoring_states", st, "Loads all visible states of one patient.",
                         patient_args(), OutputKind::state, {"patient_id", "n_states", "states"}),
                    [](const json& a, const ToolContext& c) {
                      const auto ss = states_for(c, a);
                      json states = json::array();
                      for (const auto& s : ss) states.push_back(state_json(s));
                      return json{{"patient_id", patient_of(a)}, {"n_states", ss.size()}, {"states", states}};
                    });
}

}  // namespace

std::vector<std::string> dataset_supported_targets(Dataset d) {
  switch (d) {
    case Dataset::icentia11k:
    case Dataset::synthetic: return {"af", "heart_rate", "hrv", "rhythm", "tachycardia"};
    case Dataset::af_ppg_ecg: return {"af", "heart_rate", "rhythm"};
    case Dataset::ppg_dalia: return {"heart_rate", "hrv", "tachycardia"};
    case Dataset::wesad: return {"heart_rate", "hrv", "stress"};
  }
  return {};
}

Modality dataset_default_modality(Dataset d) {
  return (d == Dataset::ppg_dalia || d == Dataset::wesad) ? Modality::PPG : Modality::ECG;
}

double dataset_default_window_s(Dataset d) {
  return (d == Dataset::ppg_dalia || d == Dataset::wesad) ? 60.0 : 300.0;
}

RhythmAssessment screen_stored_window(const WindowStore& store, const SampleWindow& w, const MonitorConfig& cfg) {
  const EntropyBinning binning{cfg.screen.entropy_bins, 0.6};
  if (w.duration_s >= cfg.screen.context_s) {
    return classify_rhythm(analyze_window(w, cfg.detector, cfg.band, binning).features, cfg.screen);
  }
  std::vector<double> rr;
  double quality = 0.0;
  for (const auto* p : store.range(w.dataset, w.patient_id, w.end_s() - cfg.screen.context_s, w.end_s())) {
    const auto a = analyze_window(*p, cfg.detector, cfg.band, binning);
    rr.insert(rr.end(), a.rr.rr_s.begin(), a.rr.rr_s.end());
    if (p->start_s == w.start_s) quality = a.features.signal_quality_score;
  }
  return classify_rhythm(compute_features(rr_from_intervals(rr), quality, binning), cfg.screen);
}

void register_builtin_tools(ToolRegistry& reg) {
  register_signal_tools(reg);
  register_dataset_tools(reg);
  register_record_tools(reg);
  register_proactive_tools(reg);
  register_knowledge_tools(reg);
  register_state_tools(reg);
}

}  // namespace vital
