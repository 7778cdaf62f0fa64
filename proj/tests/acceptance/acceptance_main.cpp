// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any line fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vital/agent.hpp"
#include "vital/builtin_tools.hpp"
#include "vital/features.hpp"
#include "vital/guidelines.hpp"
#include "vital/judge.hpp"
#include "vital/monitor.hpp"
#include "vital/planner.hpp"
#include "vital/proactive_eval.hpp"
#include "vital/qa.hpp"
#include "vital/responder.hpp"
#include "vital/split.hpp"

namespace fs = std::filesystem;
using namespace vital;
using testing_support::TempDir;

namespace {

struct Args {
  std::string vitalctl;
  fs::path data;
};

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- features -------------------------------------------------------------

Verdict feature_oracle() {
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> rr(0.3, 2.0);
  std::uniform_int_distribution<int> len(3, 400);
  const auto t0 = Clock::now();
  std::size_t mismatches = 0, compared = 0;
  auto check = [&](std::optional<double> got, std::optional<double> want) {
    ++compared;
    if (got.has_value() != want.has_value()) {
      ++mismatches;
    } else if (got && !oracle::close(*got, *want)) {
      ++mismatches;
    }
  };
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> x(static_cast<std::size_t>(len(rng)));
    for (auto& v : x) v = rr(rng);
    check(heart_rate(x), oracle::heart_rate(x));
    check(sdnn(x), oracle::sdnn_ms(x));
    check(rmssd(x), oracle::rmssd_ms(x));
    check(coeff_variation(x), oracle::cv(x));
    check(delta_rr_entropy(x), oracle::delta_rr_entropy(x));
    check(turning_point_ratio(x), oracle::turning_point_ratio(x));
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 5.0,
          std::to_string(compared - mismatches) + "/" + std::to_string(compared) + " within rel 1e-9, " +
              fmt("%.2f s", secs)};
}

Verdict tpr_expectation() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> rr(0.5, 1.2);
  double sum = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(10000);
    for (auto& v : x) v = rr(rng);
    sum += *turning_point_ratio(x);
  }
  const double mean = sum / 100.0;
  return {mean >= 0.646 && mean <= 0.686, fmt("mean TPR %.4f", mean) + " (window [0.646, 0.686])"};
}

// ---- monitor --------------------------------------------------------------

struct Replay {
  testing_support::Stream stream;
  MonitorRun run;
  double seconds = 0.0;
};

Replay replay(const std::string& script, bool judge) {
  const auto t0 = Clock::now();
  auto [s, opt] = testing_support::load_script(script);
  Replay r;
  r.stream = testing_support::make_stream(s, opt);
  MonitorConfig cfg;
  cfg.judge_enabled = judge;
  static const GuidelineStore guidelines = GuidelineStore::builtin();
  MockJudgeBackend mock(cfg.rules);
  r.run = run_monitor(r.stream.windows, cfg, &guidelines, judge ? &mock : nullptr,
                      {{opt.patient_id, r.stream.annotations}});
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<AlertRecord> all_alerts(const MonitorRun& run) {
  std::vector<AlertRecord> out;
  for (const auto& [pid, m] : run.patients) out.insert(out.end(), m.alerts().begin(), m.alerts().end());
  return out;
}

double hours_of(const MonitorRun& run) {
  double s = 0.0;
  for (const auto& [pid, m] : run.patients) {
    for (const auto& st : m.states()) s += st.window_duration_s;
  }
  return s / 3600.0;
}

Verdict proactive_replay() {
  const auto r = replay("replay_2h.json", false);
  const auto alerts = all_alerts(r.run);
  const auto pid = r.run.patients.begin()->first;
  const auto episodes = episodes_from_annotations(pid, r.stream.annotations);
  const auto rep = eval_proactive(alerts, episodes, hours_of(r.run));
  double extreme_latency = 0.0, sustained_latency = 0.0;
  bool all_matched = rep.missed_episodes == 0;
  for (const auto& a : alerts) {
    for (const auto& e : episodes) {
      if (a.time_s < e.onset_s || a.time_s > e.offset_s) continue;
      const double lat = a.time_s - e.onset_s;
      if (a.fired_rule == AlertRule::sustained_tachycardia) {
        sustained_latency = std::max(sustained_latency, lat);
      } else {
        extreme_latency = std::max(extreme_latency, lat);
      }
    }
  }
  const bool pass = alerts.size() == 3 && all_matched && rep.far_per_hour == 0.0 && extreme_latency <= 10.0 &&
                    sustained_latency <= 310.0 && r.seconds < 30.0;
  return {pass, std::to_string(alerts.size()) + " alerts, " + std::to_string(rep.matched_episodes) + "/" +
                    std::to_string(episodes.size()) + " episodes, FAR/h " + fmt("%.2f", rep.far_per_hour) +
                    ", extreme latency " + fmt("%.0f s", extreme_latency) + ", sustained latency " +
                    fmt("%.0f s", sustained_latency) + ", " + fmt("%.2f s", r.seconds)};
}

Verdict dedup_bound() {
  std::mt19937_64 rng(4242);
  std::size_t violations = 0, checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    StreamScript s;
    s.total_duration_s = 1200.0;
    s.base_hr_bpm = std::uniform_real_distribution<double>(60.0, 85.0)(rng);
    s.noise_seed = rng();
    double t = std::uniform_real_distribution<double>(30.0, 200.0)(rng);
    std::uniform_int_distribution<int> kind(0, 3);
    while (t < 1000.0) {
      const double end = std::min(t + std::uniform_real_distribution<double>(30.0, 400.0)(rng), 1190.0);
      switch (kind(rng)) {
        case 0: s.segments.push_back({t, end, SegmentKind::tachycardia, 175.0}); break;
        case 1: s.segments.push_back({t, end, SegmentKind::bradycardia, 30.0}); break;
        case 2: s.segments.push_back({t, end, SegmentKind::tachycardia, 125.0}); break;
        default: s.segments.push_back({t, end, SegmentKind::af_like, 0.3}); break;
      }
      t = end + std::uniform_real_distribution<double>(20.0, 200.0)(rng);
    }
    const auto stream = testing_support::make_stream(s);
    MonitorSession session("p0", MonitorConfig{});
    for (const auto& w : stream.windows) session.process_window(w);
    for (AlertRule rule : {AlertRule::extreme_bradycardia, AlertRule::extreme_tachycardia,
                           AlertRule::sustained_tachycardia}) {
      std::size_t episodes = 0, alerts = 0;
      bool prev = false;
      for (const auto& st : session.memory().states()) {
        bool now = false;
        for (const auto& n : st.metadata.value(kRulesFiredKey, nlohmann::json::array())) {
          now = now || n == to_string(rule);
        }
        episodes += now && !prev;
        prev = now;
      }
      for (const auto& a : session.memory().alerts()) alerts += a.fired_rule == rule;
      ++checked;
      violations += alerts > episodes;
    }
  }
  return {violations == 0, std::to_string(checked - violations) + "/" + std::to_string(checked) +
                               " (script, rule) pairs within bound over 50 scripts"};
}

Verdict judge_direction() {
  const auto off = replay("af_episode_2h.json", false);
  const auto on = replay("af_episode_2h.json", true);
  const auto pid = off.run.patients.begin()->first;
  const auto episodes = episodes_from_annotations(pid, off.stream.annotations);
  const auto a_off = all_alerts(off.run), a_on = all_alerts(on.run);
  const auto r_off = eval_proactive(a_off, episodes, hours_of(off.run));
  const auto r_on = eval_proactive(a_on, episodes, hours_of(on.run));
  // Per episode: a miss counts as infinite latency. Medians are reported
  // only; they can rise when the judge catches episodes rules never see.
  bool latency_ok = true;
  std::string per_episode;
  auto show = [](const std::optional<double>& l) { return l ? fmt("%.0f", *l) : std::string("miss"); };
  for (std::size_t i = 0; i < r_off.episodes.size(); ++i) {
    const auto& x = r_off.episodes[i].latency_s;
    const auto& y = r_on.episodes[i].latency_s;
    if (x && (!y || *y > *x)) latency_ok = false;
    per_episode += (per_episode.empty() ? "" : ", ") + r_off.episodes[i].episode.label + " " + show(x) + "->" + show(y);
  }
  auto median = [](const ProactiveReport& r) {
    return r.latency_median_s ? fmt("%.0f s", *r.latency_median_s) : std::string("none");
  };
  const bool pass = latency_ok && a_on.size() >= a_off.size() && r_on.matched_episodes >= r_off.matched_episodes;
  return {pass, "rule-only " + std::to_string(a_off.size()) + " alerts, median latency " + median(r_off) +
                    "; with judge " + std::to_string(a_on.size()) + " alerts, median latency " + median(r_on) +
                    "; episodes matched " + std::to_string(r_off.matched_episodes) + " -> " +
                    std::to_string(r_on.matched_episodes) + "; per-episode latency s: " + per_episode};
}

// ---- vitalctl runs --------------------------------------------------------

int sh(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

Verdict replay_determinism(const Args& args, const TempDir& dir) {
  const fs::path w = dir / "w";
  if (sh(args.vitalctl + " --offline synth " + q(args.data / "scripts/af_episode_2h.json") + " -o " + q(w)) != 0) {
    return {false, "synth failed"};
  }
  for (const char* run : {"run1", "run2"}) {
    if (sh(args.vitalctl + " --offline --judge on monitor " + q(w / "windows.jsonl") + " --annotations " +
           q(w / "annotations.jsonl") + " -o " + q(dir / run)) != 0) {
      return {false, std::string("monitor ") + run + " failed"};
    }
  }
  std::size_t files = 0, identical = 0, bytes = 0;
  for (const auto& e : fs::directory_iterator(dir / "run1")) {
    for (const char* name : {"states.jsonl", "alerts.jsonl"}) {
      const auto a = slurp(e.path() / name);
      const auto b = slurp(dir / "run2" / e.path().filename() / name);
      ++files;
      bytes += a.size();
      identical += !a.empty() && a == b;
    }
  }
  return {files > 0 && identical == files,
          std::to_string(identical) + "/" + std::to_string(files) + " files byte-identical (" +
              std::to_string(bytes) + " bytes)"};
}

Verdict leakage_scan(const Args& args, const TempDir& dir) {
  const fs::path w = dir / "w";
  if (sh(args.vitalctl + " --offline --judge on --fair monitor " + q(w / "windows.jsonl") + " --annotations " +
         q(w / "annotations.jsonl") + " -o " + q(dir / "fair")) != 0) {
    return {false, "fair monitor run failed"};
  }
  std::size_t hits = 0, files = 0, bytes = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "fair")) {
    if (!e.is_regular_file()) continue;
    ++files;
    const auto text = slurp(e.path());
    bytes += text.size();
    for (auto name : hidden_field_names()) {
      if (text.find("\"" + std::string(name) + "\"") != std::string::npos) ++hits;
    }
  }
  // The unfiltered run of the same input must carry the block, or the scan
  // proves nothing.
  const auto raw = slurp(dir / "run1" / fs::directory_iterator(dir / "run1")->path().filename() / "states.jsonl");
  const bool control = raw.find("\"rhythm_class\"") != std::string::npos;
  return {files > 0 && hits == 0 && control, std::to_string(hits) + " hidden field names in " +
                                                 std::to_string(files) + " files (" + std::to_string(bytes) +
                                                 " bytes); unfiltered control carries them: " +
                                                 (control ? "yes" : "no")};
}

// ---- agent and scoring ----------------------------------------------------

ToolContext fixture_ctx(FixtureKnowledgeClient& knowledge) {
  const auto& fx = testing_support::qa_fixture();
  ToolContext ctx;
  ctx.windows = &fx.windows;
  ctx.states = &fx.fair;
  ctx.memories = &fx.memories;
  ctx.knowledge = &knowledge;
  ctx.monitor = &fx.cfg;
  return ctx;
}

Verdict agent_loop() {
  const auto& fx = testing_support::qa_fixture();
  FixtureKnowledgeClient knowledge;
  const ToolRegistry reg = make_builtin_registry();
  DeterministicPlanner planner;
  DeterministicResponder responder;
  const Agent agent(reg, fixture_ctx(knowledge), planner, responder);
  std::vector<Prediction> preds;
  int max_cycles = 0;
  for (const auto& e : fx.examples) {
    const auto r = agent.run(e.to_query());
    max_cycles = std::max(max_cycles, r.cycles);
    preds.push_back({e.id, r.answer.text});
  }
  const auto rep = score_qa(fx.examples, preds);

  const QAExample* hr = nullptr;
  for (const auto& e : fx.examples) {
    if (e.target == targets::hr_current && dataset_default_modality(e.dataset) == Modality::ECG) {
      hr = &e;
      break;
    }
  }
  if (!hr) return {false, "fixture has no ECG heart-rate example"};
  const auto failing =
      testing_support::registry_with_overrides({{"analyze_heart_rate", testing_support::failing_handler("injected")}});
  const Agent broken(failing, fixture_ctx(knowledge), planner, responder);
  const auto r = broken.run(hr->to_query());
  const bool injected_ok = !r.reports.empty() && r.reports[0].count(IssueKind::tool_success) == 1 && r.replans == 1 &&
                           r.cycles <= 2;
  const bool pass = fx.examples.size() == 120 && rep.overall.accuracy() == 1.0 && max_cycles <= 2 && injected_ok;
  return {pass, fmt("accuracy %.3f", rep.overall.accuracy()) + " on " + std::to_string(fx.examples.size()) +
                    " examples, max cycles " + std::to_string(max_cycles) + "; injected failure: tool_success " +
                    std::to_string(r.reports.empty() ? 0 : r.reports[0].count(IssueKind::tool_success)) +
                    ", replans " + std::to_string(r.replans) + ", cycles " + std::to_string(r.cycles)};
}

ToolResult ok(const std::string& tool, nlohmann::json payload) {
  ToolResult r;
  r.tool_name = tool;
  r.payload = std::move(payload);
  return r;
}

Verdict validation_dimensions() {
  const ToolRegistry reg = make_builtin_registry();
  auto plan = [](std::initializer_list<const char*> tools) {
    Plan p;
    for (const char* t : tools) p.steps.push_back({t, nlohmann::json::object(), ""});
    return p;
  };
  const nlohmann::json hr70 = {{"hr_bpm", 70.0}, {"n_beats", 12}, {"signal_quality_score", 1.0}};
  const nlohmann::json pr95 = {{"pulse_rate_bpm", 95.0}, {"n_beats", 16}, {"signal_quality_score", 1.0}};

  ToolResult errored;
  errored.tool_name = "analyze_heart_rate";
  errored.status = ToolStatus::error;
  errored.error_code = "tool_failure";
  errored.message = "adversarial failure";
  nlohmann::json dropped = hr70;
  dropped.erase("hr_bpm");

  struct Case {
    IssueKind kind;
    Plan plan;
    std::vector<std::optional<ToolResult>> results;
  };
  const std::vector<Case> cases{
      {IssueKind::completeness, plan({"analyze_heart_rate", "analyze_pulse_rate"}), {ok("analyze_heart_rate", hr70)}},
      {IssueKind::tool_success, plan({"analyze_heart_rate"}), {errored}},
      {IssueKind::required_fields, plan({"analyze_heart_rate"}), {ok("analyze_heart_rate", dropped)}},
      {IssueKind::consistency,
       plan({"analyze_heart_rate", "analyze_pulse_rate"}),
       {ok("analyze_heart_rate", hr70), ok("analyze_pulse_rate", pr95)}},
  };
  std::string detail;
  bool pass = true;
  for (const auto& c : cases) {
    const auto rep = validate(c.plan, c.results, reg);
    const bool once = rep.issues.size() == 1 && rep.count(c.kind) == 1;
    pass = pass && once;
    detail += (detail.empty() ? "" : ", ") + std::string(to_string(c.kind)) + " " + std::to_string(rep.count(c.kind)) +
              "/" + std::to_string(rep.issues.size());
  }
  return {pass, detail + " (kind count / total issues)"};
}

Verdict scoring() {
  const auto& fx = testing_support::qa_fixture();
  std::vector<Prediction> oracle, wrong;
  std::vector<QAExample> verify;
  for (const auto& e : fx.examples) {
    oracle.push_back({e.id, e.answer});
    if (e.qtype == QType::single_verify) {
      verify.push_back(e);
      wrong.push_back({e.id, e.answer == "yes" ? "no" : "yes"});
    }
  }
  const double oracle_acc = score_qa(fx.examples, oracle).overall.accuracy();
  const double wrong_acc = score_qa(verify, wrong).overall.accuracy();
  QAExample gold;
  gold.id = "tol";
  gold.qtype = QType::single_query;
  gold.answer = "72 bpm";
  gold.target = std::string(targets::hr_current);
  const bool near = answer_correct(gold, "73 bpm");
  const bool far = answer_correct(gold, "76 bpm");
  const bool pass = oracle_acc == 1.0 && wrong_acc == 0.0 && !verify.empty() && near && !far;
  return {pass, fmt("oracle %.3f", oracle_acc) + fmt(", constant-wrong verify %.3f", wrong_acc) + " over " +
                    std::to_string(verify.size()) + " verify examples; gold 72: 73 " +
                    (near ? "correct" : "incorrect") + ", 76 " + (far ? "correct" : "incorrect")};
}

Verdict split() {
  auto items = testing_support::split_fixture();
  const auto base = split_dev_test(items);
  std::mt19937 rng(9);
  bool invariant = true;
  for (int i = 0; i < 5; ++i) {
    std::shuffle(items.begin(), items.end(), rng);
    const auto again = split_dev_test(items);
    invariant = invariant && again.dev == base.dev && again.test == base.test;
  }
  bool per_stratum = true;
  for (DevRounding mode : {DevRounding::floor, DevRounding::ceil}) {
    SplitConfig cfg;
    cfg.rounding = mode;
    const auto s = split_dev_test(items, cfg);
    std::map<std::pair<std::string, std::string>, std::size_t> size, dev;
    std::map<std::string, std::pair<std::string, std::string>> key;
    for (const auto& it : items) {
      ++size[{it.dataset, it.tier}];
      key[it.id] = {it.dataset, it.tier};
    }
    for (const auto& id : s.dev) ++dev[key.at(id)];
    for (const auto& [k, n] : size) {
      const double x = 0.3 * static_cast<double>(n);
      const auto want = static_cast<std::size_t>(mode == DevRounding::floor ? std::floor(x + 1e-9) : std::ceil(x - 1e-9));
      per_stratum = per_stratum && dev[k] == want;
    }
  }
  const bool pass = base.dev.size() == 557 && base.test.size() == 1305 && invariant && per_stratum;
  return {pass, std::to_string(base.dev.size()) + "/" + std::to_string(base.test.size()) +
                    " dev/test; permutation-invariant: " + (invariant ? "yes" : "no") +
                    "; per-stratum count rule (floor and ceil): " + (per_stratum ? "holds" : "violated")};
}

}  // namespace

int main(int argc, char** argv) {
  Args args;
  args.data = testing_support::data_dir();
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--vitalctl" && i + 1 < argc) {
      args.vitalctl = argv[++i];
    } else if (a == "--data" && i + 1 < argc) {
      args.data = argv[++i];
    } else {
      std::cerr << "usage: vital_acceptance --vitalctl PATH [--data DIR]\n";
      return 2;
    }
  }
  if (args.vitalctl.empty()) {
    std::cerr << "usage: vital_acceptance --vitalctl PATH [--data DIR]\n";
    return 2;
  }

  TempDir dir;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"feature-oracle", feature_oracle},
      {"tpr-expectation", tpr_expectation},
      {"proactive-replay", proactive_replay},
      {"dedup-bound", dedup_bound},
      {"judge-direction", judge_direction},
      {"replay-determinism", [&] { return replay_determinism(args, dir); }},
      {"agent-loop", agent_loop},
      {"validation-dimensions", validation_dimensions},
      {"scoring", scoring},
      {"split", split},
      {"leakage-filter", [&] { return leakage_scan(args, dir); }},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
