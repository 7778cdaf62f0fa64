#include "app.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>

#include "run_config.hpp"
#include "vital/agent.hpp"
#include "vital/builtin_tools.hpp"
#include "vital/error.hpp"
#include "vital/jsonl.hpp"
#include "vital/knowledge.hpp"
#include "vital/planner.hpp"
#include "vital/proactive_eval.hpp"
#include "vital/qa.hpp"
#include "vital/qa_generation.hpp"
#include "vital/responder.hpp"
#include "vital/split.hpp"
#include "vital/stores.hpp"

namespace vital::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  bool offline = false;
  bool fair = false;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string judge;  // "", "on", "off"
};

RunConfig resolve_config(const Globals& g) {
  RunConfig c = g.config.empty() ? RunConfig{} : RunConfig::load(g.config);
  if (g.offline) {
    if (c.endpoint) throw ConfigError("--offline conflicts with the config's endpoint section");
    c.backend = Backend::offline;
  }
  if (g.seed) c.seed = *g.seed;
  if (g.judge == "on") c.monitor.judge_enabled = true;
  if (g.judge == "off") c.monitor.judge_enabled = false;
  c.validate();
  return c;
}

EndpointConfig endpoint_of(const RunConfig& c) {
  EndpointConfig ep = EndpointConfig::from_env().value_or(EndpointConfig{});
  if (c.endpoint) {
    if (!c.endpoint->url.empty()) ep.url = c.endpoint->url;
    if (!c.endpoint->model.empty()) ep.model = c.endpoint->model;
    ep.timeout = c.endpoint->timeout;
  }
  if (ep.url.empty()) throw ConfigError("endpoint backend selected but no endpoint URL (set VITAL_LLM_ENDPOINT)");
  return ep;
}

GuidelineStore guidelines_of(const RunConfig& c) {
  return c.guidelines ? GuidelineStore::load(*c.guidelines) : GuidelineStore::builtin();
}

void emit(std::ostream& out, const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    out << j.dump(2) << "\n";
  } else {
    write_json_file(path, j);
  }
}

// ---- synth ----------------------------------------------------------------

struct StreamSpec {
  std::string patient_id = "synthetic-0";
  Dataset dataset = Dataset::synthetic;
  Modality modality = Modality::ECG;
  double fs = 250.0;
  double window_s = 10.0;
  StreamScript script;
};

StreamSpec stream_spec(const json& j) {
  StreamSpec s;
  s.patient_id = j.value("patient_id", s.patient_id);
  if (j.contains("dataset")) s.dataset = j["dataset"].get<Dataset>();
  if (j.contains("modality")) s.modality = j["modality"].get<Modality>();
  s.fs = j.value("fs", s.fs);
  s.window_s = j.value("window_s", s.window_s);
  s.script = j.get<StreamScript>();
  validate_script(s.script);
  return s;
}

struct SynthArgs {
  std::string script;
  std::string out;
  std::optional<double> fs;
  std::optional<double> window_s;
  std::string modality;
  std::string patient;
  std::string dataset;
};

int cmd_synth(const Globals& g, const SynthArgs& a, std::ostream& out) {
  resolve_config(g);
  const json doc = read_json_file(a.script);
  std::vector<StreamSpec> specs;
  const bool multi = doc.contains("streams");
  if (multi) {
    for (const auto& s : doc["streams"]) specs.push_back(stream_spec(s));
  } else {
    specs.push_back(stream_spec(doc));
  }
  if (!multi) {
    auto& s = specs.front();
    if (a.fs) s.fs = *a.fs;
    if (a.window_s) s.window_s = *a.window_s;
    if (!a.modality.empty()) s.modality = parse_modality(a.modality);
    if (!a.patient.empty()) s.patient_id = a.patient;
    if (!a.dataset.empty()) s.dataset = parse_dataset(a.dataset);
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!ids.insert(specs[i].patient_id).second) throw ConfigError("duplicate patient_id " + specs[i].patient_id);
    if (g.seed) specs[i].script.noise_seed = *g.seed + i;
  }

  fs::create_directories(a.out);
  JsonlWriter windows(fs::path(a.out) / "windows.jsonl");
  JsonlWriter annotations(fs::path(a.out) / "annotations.jsonl");
  std::size_t n_windows = 0, n_annotations = 0, discarded = 0;
  for (const auto& s : specs) {
    const SyntheticStream stream = synthesize_stream(s.script, s.fs, s.modality);
    const Segmentation seg = segment_stream(stream.samples, s.fs, s.window_s, {s.patient_id, s.dataset, s.modality});
    for (const auto& w : seg.windows) windows.write(w);
    for (const auto& ann : stream.annotations) {
      json j = ann;
      if (multi) j["patient_id"] = s.patient_id;
      annotations.write(j);
    }
    n_windows += seg.windows.size();
    n_annotations += stream.annotations.size();
    discarded += seg.discarded_samples;
  }
  windows.flush();
  annotations.flush();
  out << json{{"patients", specs.size()},
              {"windows", n_windows},
              {"annotations", n_annotations},
              {"discarded_samples", discarded},
              {"out", a.out}}
             .dump()
      << "\n";
  return 0;
}

// ---- monitor --------------------------------------------------------------

std::vector<SampleWindow> read_windows(const fs::path& path) {
  std::vector<SampleWindow> out;
  std::size_t line = 0;
  for (const auto& j : read_jsonl(path)) {
    ++line;
    if (auto v = window_schema_violations(j); !v.empty()) throw ParseError(path.string() + ": " + v.front(), line);
    out.push_back(j.get<SampleWindow>());
  }
  return out;
}

std::map<std::string, std::vector<Annotation>> read_reference(const fs::path& path,
                                                              const std::vector<SampleWindow>& windows) {
  std::set<std::string> patients;
  for (const auto& w : windows) patients.insert(w.patient_id);
  std::map<std::string, std::vector<Annotation>> ref;
  for (const auto& p : patients) ref[p];
  std::size_t line = 0;
  for (const auto& j : read_jsonl(path)) {
    ++line;
    std::string pid;
    if (j.contains("patient_id")) {
      pid = j["patient_id"].get<std::string>();
    } else if (patients.size() == 1) {
      pid = *patients.begin();
    } else {
      throw ParseError(path.string() + ": annotation without patient_id in a multi-patient run", line);
    }
    if (j.contains("onset_s")) {
      ref[pid].push_back({j.at("onset_s").get<double>(), j.at("offset_s").get<double>(), j.at("label").get<std::string>()});
    } else {
      ref[pid].push_back(j.get<Annotation>());
    }
  }
  return ref;
}

struct MonitorArgs {
  std::string windows;
  std::string out;
  std::string annotations;
};

int cmd_monitor(const Globals& g, const MonitorArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve_config(g);
  const auto windows = read_windows(a.windows);
  std::map<std::string, std::vector<Annotation>> reference;
  if (!a.annotations.empty()) reference = read_reference(a.annotations, windows);

  const GuidelineStore guidelines = guidelines_of(cfg);
  std::unique_ptr<CompletionClient> judge;
  if (cfg.monitor.judge_enabled) {
    if (cfg.backend == Backend::offline) {
      judge = std::make_unique<MockJudgeBackend>(cfg.monitor.rules);
    } else {
      judge = std::make_unique<HttpCompletionClient>(endpoint_of(cfg));
    }
  }
  const MonitorRun run = run_monitor(windows, cfg.monitor, &guidelines, judge.get(), reference);
  const fs::path dir = a.out.empty() ? cfg.output_dir : fs::path(a.out);
  write_monitor_run(run, dir, cfg.monitor, g.fair);

  std::size_t n_alerts = 0;
  json per = json::object();
  for (const auto& [pid, mem] : run.patients) {
    n_alerts += mem.alerts().size();
    per[pid] = {{"windows", mem.states().size()}, {"alerts", mem.alerts().size()}};
  }
  out << json{{"patients", per},
              {"windows", windows.size()},
              {"alerts", n_alerts},
              {"judge_calls", run.judge_calls},
              {"fair", g.fair},
              {"out", dir.string()}}
             .dump()
      << "\n";
  return 0;
}

// ---- qa -------------------------------------------------------------------

std::map<std::string, PatientMemory> load_memories(const fs::path& dir) {
  std::map<std::string, PatientMemory> out;
  if (!fs::is_directory(dir)) return out;
  std::vector<fs::path> subdirs;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && fs::exists(e.path() / "states.jsonl")) subdirs.push_back(e.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  for (const auto& p : subdirs) out.emplace(p.filename().string(), PatientMemory::load(p));
  return out;
}

struct QAArgs {
  std::string qa_file;
  std::string question;
  std::string dataset;
  std::string patient;
  std::optional<double> start;
  std::optional<double> end;
  std::string target;
  std::string qtype;
  std::vector<std::string> options;
  std::string windows;
  std::string states;
  std::string out;
  std::string trace;
};

int cmd_qa(const Globals& g, const QAArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve_config(g);
  std::vector<std::pair<std::string, Query>> queries;
  if (!a.qa_file.empty()) {
    for (const auto& e : read_qa_file(a.qa_file)) queries.emplace_back(e.id, e.to_query());
  } else if (!a.question.empty()) {
    Query q;
    q.text = a.question;
    if (!a.patient.empty()) {
      if (a.dataset.empty() || !a.start || !a.end) {
        throw ConfigError("--patient needs --dataset, --start and --end");
      }
      q.locator = WindowLocator{parse_dataset(a.dataset), a.patient, *a.start, *a.end};
    }
    if (!a.target.empty()) q.target = a.target;
    if (!a.qtype.empty()) q.qtype = parse_qtype(a.qtype);
    q.options = a.options;
    q.validate();
    queries.emplace_back("q-0", q);
  } else {
    throw ConfigError("qa needs --qa or --question");
  }

  WindowStore windows;
  if (!a.windows.empty()) windows = WindowStore::load_jsonl(a.windows);
  StateStore raw_states;
  std::map<std::string, PatientMemory> memories;
  if (!a.states.empty()) {
    raw_states = StateStore::load_dir(a.states);
    memories = load_memories(a.states);
  }
  const StateStore states = raw_states.fair_view();
  FixtureKnowledgeClient fixture_knowledge;
  std::unique_ptr<HttpKnowledgeClient> live_knowledge;
  KnowledgeClient* knowledge = &fixture_knowledge;
  if (cfg.backend == Backend::endpoint) {
    live_knowledge = std::make_unique<HttpKnowledgeClient>();
    knowledge = live_knowledge.get();
  }
  ToolContext ctx;
  ctx.windows = &windows;
  ctx.states = &states;
  ctx.memories = &memories;
  ctx.knowledge = knowledge;
  ctx.monitor = &cfg.monitor;
  const ToolRegistry registry = make_builtin_registry();

  std::unique_ptr<CompletionClient> client;
  std::unique_ptr<Planner> planner;
  std::unique_ptr<Responder> responder;
  if (cfg.backend == Backend::endpoint) {
    client = std::make_unique<HttpCompletionClient>(endpoint_of(cfg));
    planner = std::make_unique<LlmPlanner>(*client);
    responder = std::make_unique<LlmResponder>(*client);
  } else {
    planner = std::make_unique<DeterministicPlanner>();
    responder = std::make_unique<DeterministicResponder>();
  }
  const Agent agent(registry, ctx, *planner, *responder, {cfg.replan_budget, {}});

  std::unique_ptr<JsonlWriter> preds;
  if (!a.out.empty() && a.out != "-") preds = std::make_unique<JsonlWriter>(a.out);
  std::unique_ptr<JsonlWriter> trace;
  if (!a.trace.empty()) trace = std::make_unique<JsonlWriter>(a.trace);
  for (const auto& [id, q] : queries) {
    const AgentResult r = agent.run(q);
    const json p = Prediction{id, r.answer.text};
    if (preds) {
      preds->write(p);
    } else {
      out << p.dump() << "\n";
    }
    if (trace) {
      json t = r;
      t["id"] = id;
      trace->write(t);
    }
  }
  if (preds) preds->flush();
  if (trace) trace->flush();
  return 0;
}

struct GenQAArgs {
  std::string states;
  std::string out;
};

int cmd_gen_qa(const Globals& g, const GenQAArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve_config(g);
  const StateStore states = StateStore::load_dir(a.states);
  const QAGenResult r = generate_synthetic_qa(states, cfg.qa_gen);
  JsonlWriter w(a.out);
  for (const auto& e : r.examples) w.write(e);
  w.flush();
  out << json{{"examples", r.examples.size()}, {"report", r.report}, {"out", a.out}}.dump() << "\n";
  return 0;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string qa_file;
  std::string predictions;
  std::string run_dir;
  std::string alerts;
  std::string annotations;
  std::string patient;
  std::optional<double> hours;
  std::optional<double> grace_s;
  std::string out;
};

int cmd_eval_qa(const Globals& g, const EvalArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve_config(g);
  const auto examples = read_qa_file(a.qa_file);
  const auto preds = read_predictions(a.predictions);
  emit(out, score_qa(examples, preds, cfg.scoring), a.out);
  return 0;
}

int cmd_eval_proactive(const Globals& g, const EvalArgs& a, std::ostream& out) {
  resolve_config(g);
  std::vector<AlertRecord> alerts;
  double seconds = 0.0;
  std::set<std::string> patients;
  if (!a.run_dir.empty()) {
    for (const auto& [pid, mem] : load_memories(a.run_dir)) {
      patients.insert(pid);
      alerts.insert(alerts.end(), mem.alerts().begin(), mem.alerts().end());
      for (const auto& s : mem.states()) seconds += s.window_duration_s;
    }
  } else if (!a.alerts.empty()) {
    for (const auto& j : read_jsonl(a.alerts)) {
      if (j.contains("header")) continue;
      alerts.push_back(j.get<AlertRecord>());
      patients.insert(alerts.back().patient_id);
    }
  } else {
    throw ConfigError("eval proactive needs --run or --alerts");
  }
  std::string default_patient = a.patient;
  if (default_patient.empty() && patients.size() == 1) default_patient = *patients.begin();
  const auto episodes = read_episodes(a.annotations, default_patient);
  const double hours = a.hours ? *a.hours : seconds / 3600.0;
  ProactiveEvalConfig pc;
  if (a.grace_s) pc.grace_s = *a.grace_s;
  json report = eval_proactive(alerts, episodes, hours, pc);
  std::map<std::string, std::size_t> by_rule;
  for (const auto& al : alerts) ++by_rule[std::string(to_string(al.fired_rule))];
  report["alerts_by_rule"] = by_rule;
  emit(out, report, a.out);
  return 0;
}

int cmd_eval_rhythm(const Globals& g, const EvalArgs& a, std::ostream& out) {
  resolve_config(g);
  const StateStore store = StateStore::load_dir(a.run_dir);
  std::vector<std::string> pred, truth;
  for (const auto& pid : store.patients()) {
    auto [p, t] = rhythm_pairs(*store.states(pid));
    pred.insert(pred.end(), p.begin(), p.end());
    truth.insert(truth.end(), t.begin(), t.end());
  }
  if (truth.empty()) throw IntegrityError("no states carry both a screen result and a reference rhythm label");
  json report = eval_rhythm(pred, truth);
  report["windows"] = truth.size();
  emit(out, report, a.out);
  return 0;
}

// ---- tools, split, validate -----------------------------------------------

int cmd_tools(const Globals& g, const std::string& path, std::ostream& out) {
  resolve_config(g);
  emit(out, make_builtin_registry().schema_export(), path);
  return 0;
}

struct SplitArgs {
  std::string qa_file;
  std::optional<double> dev_frac;
  std::string rounding;
  std::string out;
};

int cmd_split(const Globals& g, const SplitArgs& a, std::ostream& out) {
  RunConfig cfg = resolve_config(g);
  SplitConfig sc = cfg.split;
  if (g.seed) sc.seed = std::to_string(*g.seed);
  if (a.dev_frac) sc.dev_frac = *a.dev_frac;
  if (!a.rounding.empty()) sc.rounding = a.rounding == "ceil" ? DevRounding::ceil : DevRounding::floor;
  std::vector<SplitItem> items;
  std::size_t line = 0;
  for (const auto& j : read_jsonl(a.qa_file)) {
    ++line;
    if (!j.contains("id") || !j["id"].is_string()) throw ParseError(a.qa_file + ": record without string id", line);
    items.push_back({j["id"].get<std::string>(), j.value("dataset", std::string{}), j.value("tier", std::string{})});
  }
  json report = split_dev_test(items, sc);
  report["config"] = {{"dev_frac", sc.dev_frac},
                      {"seed", sc.seed},
                      {"rounding", sc.rounding == DevRounding::ceil ? "ceil" : "floor"}};
  emit(out, report, a.out);
  return 0;
}

int cmd_validate(const Globals& g, const std::string& path, std::ostream& out) {
  resolve_config(g);
  json problems = json::array();
  std::size_t line = 0, n = 0;
  for (const auto& j : read_jsonl(path)) {
    ++line;
    ++n;
    auto v = window_schema_violations(j);
    if (v.empty()) {
      try {
        validate_window(j.get<SampleWindow>());
      } catch (const std::exception& e) {
        v.emplace_back(e.what());
      }
    }
    if (!v.empty()) problems.push_back({{"line", line}, {"violations", v}});
  }
  out << json{{"records", n}, {"invalid", problems.size()}, {"problems", problems}}.dump(2) << "\n";
  if (!problems.empty()) throw IntegrityError(std::to_string(problems.size()) + " invalid window records");
  return 0;
}

json error_object(std::string_view kind, const std::string& message, std::size_t line = 0) {
  json e = {{"kind", kind}, {"message", message}};
  if (line) e["line"] = line;
  return {{"error", e}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"vitalctl: proactive monitoring, QA agent and evaluation over physiological windows"};
  app.set_version_flag("--version", "vitalctl 0.3.0");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_flag("--offline", g.offline, "Never touch the network; mocks and fixtures stand in for backends");
  app.add_flag("--fair", g.fair, "Write leakage-filtered states (no hidden annotation fields)");
  app.add_option("--config", g.config, "Run config JSON")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed override");
  app.add_option("--judge", g.judge, "Judge checkpoints")->check(CLI::IsMember({"on", "off"}));

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Render a stream script to windows.jsonl and annotations.jsonl");
  c_synth->add_option("script", synth.script, "Script JSON")->required()->check(CLI::ExistingFile);
  c_synth->add_option("-o,--out", synth.out, "Output directory")->required();
  c_synth->add_option("--fs", synth.fs, "Sampling rate in Hz");
  c_synth->add_option("--window", synth.window_s, "Window length in seconds");
  c_synth->add_option("--modality", synth.modality)->check(CLI::IsMember({"ECG", "PPG"}));
  c_synth->add_option("--patient", synth.patient);
  c_synth->add_option("--dataset", synth.dataset);

  MonitorArgs mon;
  auto* c_mon = app.add_subcommand("monitor", "Replay windows through the proactive monitor");
  c_mon->add_option("windows", mon.windows, "Window JSONL")->required()->check(CLI::ExistingFile);
  c_mon->add_option("-o,--out", mon.out, "Output directory");
  c_mon->add_option("--annotations", mon.annotations, "Reference annotations for the hidden state block")
      ->check(CLI::ExistingFile);

  QAArgs qa;
  auto* c_qa = app.add_subcommand("qa", "Answer questions with the tool-using agent");
  c_qa->add_option("--qa", qa.qa_file, "QA JSONL")->check(CLI::ExistingFile);
  c_qa->add_option("--question", qa.question, "Single question text");
  c_qa->add_option("--dataset", qa.dataset);
  c_qa->add_option("--patient", qa.patient);
  c_qa->add_option("--start", qa.start);
  c_qa->add_option("--end", qa.end);
  c_qa->add_option("--target", qa.target);
  c_qa->add_option("--qtype", qa.qtype)->check(CLI::IsMember({"single_verify", "single_choose", "single_query"}));
  c_qa->add_option("--option", qa.options, "Answer option (repeatable)");
  c_qa->add_option("--windows", qa.windows, "Window JSONL")->check(CLI::ExistingFile);
  c_qa->add_option("--states", qa.states, "Monitor output directory")->check(CLI::ExistingDirectory);
  c_qa->add_option("-o,--out", qa.out, "Predictions JSONL (stdout when absent)");
  c_qa->add_option("--trace", qa.trace, "Per-query plan/validation trace JSONL");

  GenQAArgs gen;
  auto* c_gen = app.add_subcommand("gen-qa", "Generate template QA from monitor states");
  c_gen->add_option("--states", gen.states, "Monitor output directory (unfiltered)")
      ->required()
      ->check(CLI::ExistingDirectory);
  c_gen->add_option("-o,--out", gen.out, "QA JSONL")->required();

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "Score predictions, alerts or rhythm screens");
  c_eval->require_subcommand(1);
  auto* e_qa = c_eval->add_subcommand("qa", "Score QA predictions");
  e_qa->add_option("--qa", ev.qa_file)->required()->check(CLI::ExistingFile);
  e_qa->add_option("--predictions", ev.predictions)->required()->check(CLI::ExistingFile);
  e_qa->add_option("-o,--out", ev.out);
  auto* e_pro = c_eval->add_subcommand("proactive", "FAR/h and latency against episode annotations");
  e_pro->add_option("--run", ev.run_dir, "Monitor output directory")->check(CLI::ExistingDirectory);
  e_pro->add_option("--alerts", ev.alerts, "alerts.jsonl")->check(CLI::ExistingFile);
  e_pro->add_option("--annotations", ev.annotations)->required()->check(CLI::ExistingFile);
  e_pro->add_option("--patient", ev.patient, "Patient for annotation lines without patient_id");
  e_pro->add_option("--hours", ev.hours, "Monitored hours (default: from states)");
  e_pro->add_option("--grace", ev.grace_s, "Seconds after offset that still match");
  e_pro->add_option("-o,--out", ev.out);
  auto* e_rhy = c_eval->add_subcommand("rhythm", "Per-window AF screen against reference labels");
  e_rhy->add_option("--run", ev.run_dir, "Monitor output directory (unfiltered)")
      ->required()
      ->check(CLI::ExistingDirectory);
  e_rhy->add_option("-o,--out", ev.out);

  std::string tools_out;
  auto* c_tools = app.add_subcommand("tools", "Export the tool registry schema");
  c_tools->add_option("-o,--out", tools_out);

  SplitArgs sp;
  auto* c_split = app.add_subcommand("split", "Deterministic dev/test split of a QA file");
  c_split->add_option("qa", sp.qa_file)->required()->check(CLI::ExistingFile);
  c_split->add_option("--dev-frac", sp.dev_frac);
  c_split->add_option("--rounding", sp.rounding)->check(CLI::IsMember({"floor", "ceil"}));
  c_split->add_option("-o,--out", sp.out);

  std::string validate_path;
  auto* c_val = app.add_subcommand("validate", "Check window JSONL against the canonical schema");
  c_val->add_option("windows", validate_path)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_object("usage", e.what()).dump() << "\n";
    return 2;
  }

  try {
    if (c_synth->parsed()) return cmd_synth(g, synth, out);
    if (c_mon->parsed()) return cmd_monitor(g, mon, out);
    if (c_qa->parsed()) return cmd_qa(g, qa, out);
    if (c_gen->parsed()) return cmd_gen_qa(g, gen, out);
    if (e_qa->parsed()) return cmd_eval_qa(g, ev, out);
    if (e_pro->parsed()) return cmd_eval_proactive(g, ev, out);
    if (e_rhy->parsed()) return cmd_eval_rhythm(g, ev, out);
    if (c_tools->parsed()) return cmd_tools(g, tools_out, out);
    if (c_split->parsed()) return cmd_split(g, sp, out);
    if (c_val->parsed()) return cmd_validate(g, validate_path, out);
  } catch (const ParseError& e) {
    err << error_object(e.kind(), e.what(), e.line()).dump() << "\n";
    return 1;
  } catch (const Error& e) {
    err << error_object(e.kind(), e.what()).dump() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << error_object("parse", e.what()).dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << error_object("internal", e.what()).dump() << "\n";
    return 1;
  }
  err << error_object("usage", "no command given").dump() << "\n";
  return 2;
}

}  // namespace vital::cli
