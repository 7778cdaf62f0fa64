#include "fixtures.hpp"

#include <atomic>
#include <random>

#include "vital/error.hpp"
#include "vital/jsonl.hpp"
#include "vital/qa_generation.hpp"

namespace testing_support {

namespace fs = std::filesystem;
using namespace vital;

fs::path data_dir() { return VITAL_DATA_DIR; }

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("vital-test-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string ScriptedClient::complete(const CompletionRequest& req) {
  prompts_.push_back(req.prompt);
  if (replies_.empty()) throw BackendError("scripted client ran out of replies");
  std::string r = replies_.front();
  replies_.pop_front();
  if (r == "<timeout>") throw BackendTimeout("scripted timeout");
  if (r == "<error>") throw BackendError("scripted failure");
  return r;
}

Stream make_stream(const StreamScript& script, const StreamOptions& opt) {
  const auto s = synthesize_stream(script, opt.fs, opt.modality);
  auto seg = segment_stream(s.samples, opt.fs, opt.window_s, {opt.patient_id, opt.dataset, opt.modality});
  return {std::move(seg.windows), s.annotations};
}

namespace {

StreamOptions options_of(const nlohmann::json& j) {
  StreamOptions o;
  o.fs = j.value("fs", o.fs);
  o.window_s = j.value("window_s", o.window_s);
  o.patient_id = j.value("patient_id", o.patient_id);
  if (j.contains("modality")) o.modality = j["modality"].get<Modality>();
  if (j.contains("dataset")) o.dataset = j["dataset"].get<Dataset>();
  return o;
}

}  // namespace

std::pair<StreamScript, StreamOptions> load_script(const std::string& name) {
  const auto j = read_json_file(data_dir() / "scripts" / name);
  return {j.get<StreamScript>(), options_of(j)};
}

const QAFixture& qa_fixture() {
  static const QAFixture fx = [] {
    QAFixture f;
    const auto doc = read_json_file(data_dir() / "scripts" / "qa_fixture.json");
    std::vector<SampleWindow> all;
    std::map<std::string, std::vector<Annotation>> reference;
    for (const auto& j : doc.at("streams")) {
      const auto opt = options_of(j);
      auto s = make_stream(j.get<StreamScript>(), opt);
      reference[opt.patient_id] = s.annotations;
      all.insert(all.end(), s.windows.begin(), s.windows.end());
    }
    f.windows.add_all(all);
    const MonitorRun run = run_monitor(all, f.cfg, nullptr, nullptr, reference);
    for (const auto& [pid, mem] : run.patients) f.states.put(pid, mem.states());
    f.memories = run.patients;
    f.fair = f.states.fair_view();
    auto gen = generate_synthetic_qa(f.states);
    f.examples = std::move(gen.examples);
    f.generation_report = std::move(gen.report);
    return f;
  }();
  return fx;
}

SmallWorld::SmallWorld() {
  using namespace vital;
  StreamScript ecg;
  ecg.total_duration_s = 600.0;
  ecg.segments = {{300.0, 400.0, SegmentKind::tachycardia, 160.0}};
  ecg.noise_seed = 1;
  StreamScript af;
  af.total_duration_s = 600.0;
  af.segments = {{200.0, 500.0, SegmentKind::af_like, 0.3}};
  af.noise_seed = 2;
  StreamScript ppg;
  ppg.total_duration_s = 600.0;
  ppg.base_hr_bpm = 75.0;
  ppg.noise_seed = 3;

  auto a = make_stream(ecg, StreamOptions{250.0, Modality::ECG, 10.0, "ecg1", Dataset::icentia11k});
  auto b = make_stream(af, StreamOptions{125.0, Modality::ECG, 10.0, "af1", Dataset::af_ppg_ecg});
  auto c = make_stream(ppg, StreamOptions{64.0, Modality::PPG, 60.0, "ppg1", Dataset::ppg_dalia});
  std::vector<SampleWindow> all;
  for (auto* s : {&a, &b, &c}) all.insert(all.end(), s->windows.begin(), s->windows.end());
  windows.add_all(all);
  auto run = run_monitor(all, cfg, nullptr, nullptr,
                         {{"ecg1", a.annotations}, {"af1", b.annotations}, {"ppg1", c.annotations}});
  StateStore full;
  for (const auto& [pid, m] : run.patients) full.put(pid, m.states());
  states = full.fair_view();
  memories = std::move(run.patients);
}

vital::ToolContext SmallWorld::ctx() {
  vital::ToolContext c;
  c.windows = &windows;
  c.states = &states;
  c.memories = &memories;
  c.knowledge = &knowledge;
  c.monitor = &cfg;
  c.scratch_states = &scratch;
  return c;
}

SmallWorld& small_world() {
  static SmallWorld w;
  return w;
}

std::vector<vital::SplitItem> split_fixture() {
  struct Stratum {
    const char* dataset;
    const char* tier;
    int n;
  };
  const Stratum strata[] = {{"icentia11k", "A", 278}, {"icentia11k", "B", 278}, {"af_ppg_ecg", "A", 278},
                            {"af_ppg_ecg", "B", 278}, {"ppg_dalia", "A", 200},  {"ppg_dalia", "B", 200},
                            {"wesad", "A", 150},      {"wesad", "B", 200}};
  std::vector<vital::SplitItem> items;
  for (const auto& s : strata) {
    for (int i = 0; i < s.n; ++i) {
      items.push_back({std::string(s.dataset) + "-" + s.tier + "-" + std::to_string(i), s.dataset, s.tier});
    }
  }
  return items;
}

vital::ToolRegistry registry_with_overrides(const std::map<std::string, vital::ToolHandler>& overrides) {
  static const vital::ToolRegistry builtin = vital::make_builtin_registry();
  vital::ToolRegistry reg;
  for (const auto& d : builtin.list_tools()) {
    if (auto it = overrides.find(d.name); it != overrides.end()) {
      reg.register_tool(d, it->second);
      continue;
    }
    reg.register_tool(d, [name = d.name](const nlohmann::json& args, const vital::ToolContext& ctx) {
      auto r = builtin.invoke(name, args, ctx);
      if (!r.ok()) throw std::runtime_error(r.message);
      return r.payload;
    });
  }
  return reg;
}

vital::ToolHandler failing_handler(std::string message) {
  return [message](const nlohmann::json&, const vital::ToolContext&) -> nlohmann::json {
    throw std::runtime_error(message);
  };
}

}  // namespace testing_support
