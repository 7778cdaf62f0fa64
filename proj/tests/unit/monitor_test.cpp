#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vital/error.hpp"
#include "vital/jsonl.hpp"
#include "vital/monitor.hpp"

using namespace vital;
using testing_support::make_stream;

namespace {

StreamScript tachy_episode() {
  StreamScript s;
  s.total_duration_s = 600.0;
  s.segments = {{200.0, 300.0, SegmentKind::tachycardia, 165.0}};
  s.noise_seed = 2;
  return s;
}

std::size_t count_rule(const PatientMemory& m, AlertRule r) {
  std::size_t n = 0;
  for (const auto& a : m.alerts()) n += a.fired_rule == r;
  return n;
}

}  // namespace

TEST(Monitor, ExtremeTachycardiaAlertsOncePerEpisode) {
  auto stream = make_stream(tachy_episode());
  MonitorSession session("p0", MonitorConfig{});
  for (const auto& w : stream.windows) session.process_window(w);
  const auto& m = session.memory();
  EXPECT_EQ(m.states().size(), 60u);
  EXPECT_EQ(count_rule(m, AlertRule::extreme_tachycardia), 1u);
  EXPECT_EQ(count_rule(m, AlertRule::extreme_bradycardia), 0u);
  const auto& first = m.alerts().front();
  EXPECT_GE(first.time_s, 200.0);
  EXPECT_LE(first.time_s, 220.0);
}

TEST(Monitor, AlertedStateCarriesAlertBlock) {
  auto stream = make_stream(tachy_episode());
  MonitorSession session("p0", MonitorConfig{});
  for (const auto& w : stream.windows) session.process_window(w);
  const auto& m = session.memory();
  for (const auto& a : m.alerts()) {
    const auto* s = m.find_state(a.window_index);
    ASSERT_NE(s, nullptr);
    EXPECT_TRUE(s->alert_triggered);
    EXPECT_TRUE(s->alert_rule.has_value());
    EXPECT_TRUE(s->urgency.has_value());
  }
}

TEST(Monitor, OutOfOrderWindowThrows) {
  auto stream = make_stream(tachy_episode());
  MonitorSession session("p0", MonitorConfig{});
  session.process_window(stream.windows[0]);
  EXPECT_THROW(session.process_window(stream.windows[2]), OrderingError);
}

TEST(Monitor, HiddenBlockOnlyWithReference) {
  auto stream = make_stream(tachy_episode());
  MonitorSession plain("p0", MonitorConfig{});
  EXPECT_FALSE(plain.process_window(stream.windows[0]).state.hidden.has_value());
  MonitorSession ref("p0", MonitorConfig{});
  ref.set_reference({});
  auto r = ref.process_window(stream.windows[0]);
  ASSERT_TRUE(r.state.hidden.has_value());
  EXPECT_EQ(r.state.hidden->rhythm_class, "N");
}

TEST(Monitor, AfEpisodeMarksHiddenRhythm) {
  StreamScript s;
  s.total_duration_s = 300.0;
  s.segments = {{100.0, 200.0, SegmentKind::af_like, 0.3}};
  auto stream = make_stream(s);
  MonitorSession session("p0", MonitorConfig{});
  session.set_reference(stream.annotations);
  std::size_t af_hidden = 0, af_screened = 0;
  for (const auto& w : stream.windows) {
    auto r = session.process_window(w);
    af_hidden += r.state.hidden->rhythm_class == "AF";
    af_screened += r.rhythm.rhythm_class == RhythmClass::AF;
  }
  EXPECT_EQ(af_hidden, 10u);
  EXPECT_GE(af_screened, 6u);
}

TEST(Monitor, JudgeRunsOnCheckpointsOnlyWhenEnabled) {
  auto stream = make_stream(tachy_episode());
  auto g = GuidelineStore::builtin();
  MockJudgeBackend mock;
  MonitorConfig cfg;
  cfg.judge_enabled = true;
  MonitorSession session("p0", cfg, &g, &mock);
  std::size_t checkpoints = 0;
  for (const auto& w : stream.windows) {
    auto r = session.process_window(w);
    if (r.judge) {
      ++checkpoints;
      EXPECT_TRUE(r.snapshot.has_value());
      EXPECT_TRUE(r.state.metadata.contains(kJudgeKey));
    }
  }
  EXPECT_EQ(checkpoints, 3u);

  MockJudgeBackend idle;
  MonitorSession off("p0", MonitorConfig{}, &g, &idle);
  for (const auto& w : stream.windows) off.process_window(w);
  EXPECT_EQ(idle.calls(), 0);
}

TEST(Monitor, RunAndWriteProducesPerPatientLogs) {
  auto a = make_stream(tachy_episode(), {250.0, Modality::ECG, 10.0, "pa"});
  auto b = make_stream(tachy_episode(), {250.0, Modality::ECG, 10.0, "pb"});
  std::vector<SampleWindow> all;
  for (std::size_t i = 0; i < a.windows.size(); ++i) {
    all.push_back(a.windows[i]);
    all.push_back(b.windows[i]);
  }
  MonitorConfig cfg;
  auto run = run_monitor(all, cfg, nullptr, nullptr, {{"pa", a.annotations}});
  ASSERT_EQ(run.patients.size(), 2u);
  EXPECT_EQ(run.patients.at("pa").states().size(), 60u);
  EXPECT_TRUE(run.patients.at("pa").states().front().hidden.has_value());
  EXPECT_FALSE(run.patients.at("pb").states().front().hidden.has_value());

  testing_support::TempDir dir;
  write_monitor_run(run, dir.path(), cfg, true);
  auto alerts = read_jsonl(dir.path() / "pa" / "alerts.jsonl");
  ASSERT_FALSE(alerts.empty());
  EXPECT_TRUE(alerts.front().contains("header"));
  auto states = read_jsonl(dir.path() / "pa" / "states.jsonl");
  EXPECT_EQ(states.size(), 60u);
  for (const auto& s : states) EXPECT_FALSE(s.contains("rhythm_class"));
}
