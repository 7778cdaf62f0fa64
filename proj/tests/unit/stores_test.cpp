#include <gtest/gtest.h>

#include <fstream>

#include "fixtures.hpp"
#include "vital/error.hpp"
#include "vital/jsonl.hpp"
#include "vital/stores.hpp"

using namespace vital;
using testing_support::TempDir;

namespace {

std::vector<SampleWindow> windows(const std::string& pid, Dataset d, int n) {
  StreamScript s;
  s.total_duration_s = 10.0 * n;
  s.noise_seed = 3;
  testing_support::StreamOptions opt;
  opt.patient_id = pid;
  opt.dataset = d;
  opt.fs = 100.0;
  return testing_support::make_stream(s, opt).windows;
}

MonitoringState state(const std::string& pid, std::int64_t i) {
  MonitoringState s;
  s.state_id = pid + "-" + std::to_string(i);
  s.patient_id = pid;
  s.window_index = i;
  s.window_start_s = 10.0 * static_cast<double>(i);
  s.window_duration_s = 10.0;
  s.window_end_s = s.window_start_s + 10.0;
  s.hr_bpm = 70.0;
  s.signal_quality_score = 1.0;
  HiddenAnnotations h;
  h.rhythm_class = "N";
  s.hidden = h;
  return s;
}

}  // namespace

TEST(WindowStore, IndexesByDatasetAndPatient) {
  WindowStore store;
  store.add_all(windows("a", Dataset::icentia11k, 6));
  store.add_all(windows("b", Dataset::ppg_dalia, 3));
  EXPECT_EQ(store.size(), 9u);
  EXPECT_EQ(store.patients(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(store.patients(Dataset::ppg_dalia), std::vector<std::string>{"b"});
  ASSERT_NE(store.windows("a"), nullptr);
  EXPECT_EQ(store.windows("a")->size(), 6u);
  EXPECT_EQ(store.windows(Dataset::ppg_dalia, "a"), nullptr);
  EXPECT_EQ(store.windows("missing"), nullptr);
}

TEST(WindowStore, RangeKeepsWindowsFullyInside) {
  WindowStore store;
  store.add_all(windows("a", Dataset::icentia11k, 6));
  EXPECT_EQ(store.range(Dataset::icentia11k, "a", 10.0, 40.0).size(), 3u);
  EXPECT_EQ(store.range(Dataset::icentia11k, "a", 15.0, 40.0).size(), 2u);
  EXPECT_TRUE(store.range(Dataset::icentia11k, "zz", 0.0, 60.0).empty());
}

TEST(WindowStore, ExtractConcatenatesContiguousWindows) {
  WindowStore store;
  auto ws = windows("a", Dataset::icentia11k, 6);
  store.add_all(ws);
  auto joined = store.extract(Dataset::icentia11k, "a", 10.0, 30.0);
  EXPECT_DOUBLE_EQ(joined.start_s, 10.0);
  EXPECT_DOUBLE_EQ(joined.duration_s, 20.0);
  ASSERT_EQ(joined.samples.size(), 2000u);
  EXPECT_EQ(joined.samples.front(), ws[1].samples.front());
  EXPECT_EQ(joined.samples.back(), ws[2].samples.back());
  EXPECT_THROW(store.extract(Dataset::icentia11k, "a", 50.0, 70.0), IntegrityError);
}

TEST(WindowStore, LoadJsonlNamesBadLine) {
  TempDir dir;
  auto ws = windows("a", Dataset::icentia11k, 2);
  nlohmann::json bad = ws[1];
  bad.erase("fs");
  write_jsonl(dir / "w.jsonl", {nlohmann::json(ws[0]), bad});
  try {
    WindowStore::load_jsonl(dir / "w.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  write_jsonl(dir / "ok.jsonl", {nlohmann::json(ws[0]), nlohmann::json(ws[1])});
  EXPECT_EQ(WindowStore::load_jsonl(dir / "ok.jsonl").size(), 2u);
}

TEST(StateStore, RangeAndFairView) {
  StateStore store;
  std::vector<MonitoringState> ss;
  for (int i = 0; i < 5; ++i) ss.push_back(state("p", i));
  store.put("p", ss);
  EXPECT_EQ(store.range("p", 10.0, 30.0).size(), 2u);
  EXPECT_TRUE(store.range("q", 0.0, 100.0).empty());
  auto fair = store.fair_view();
  for (const auto& s : *fair.states("p")) EXPECT_FALSE(s.hidden.has_value());
  EXPECT_TRUE(store.states("p")->front().hidden.has_value());
}

TEST(StateStore, LoadDirReadsEveryPatient) {
  TempDir dir;
  for (const std::string pid : {"p", "q"}) {
    PatientMemory m(pid);
    for (int i = 0; i < 3; ++i) m.update(state(pid, i));
    m.persist(dir / pid);
  }
  auto store = StateStore::load_dir(dir.path());
  EXPECT_EQ(store.patients(), (std::vector<std::string>{"p", "q"}));
  EXPECT_EQ(store.states("q")->size(), 3u);
  auto single = StateStore::from_jsonl(dir / "p/states.jsonl");
  EXPECT_EQ(single.states("p")->size(), 3u);
}

TEST(Jsonl, RoundTripAndErrors) {
  TempDir dir;
  std::vector<nlohmann::json> rows{{{"b", 1}, {"a", 0.1}}, {{"x", "y"}}};
  write_jsonl(dir / "r.jsonl", rows);
  EXPECT_EQ(read_jsonl(dir / "r.jsonl"), rows);
  EXPECT_EQ(to_jsonl_line(rows[0]), "{\"a\":0.1,\"b\":1}\n");
  {
    std::ofstream f(dir / "bad.jsonl");
    f << "{\"a\":1}\n\n{oops\n";
  }
  try {
    read_jsonl(dir / "bad.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(read_jsonl(dir / "absent.jsonl"), IntegrityError);
}
