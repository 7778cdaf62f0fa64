#pragma once

#include <deque>
#include <filesystem>
#include <string>
#include <vector>

#include "vital/knowledge.hpp"
#include "vital/llm_client.hpp"
#include "vital/monitor.hpp"
#include "vital/qa.hpp"
#include "vital/split.hpp"
#include "vital/stores.hpp"
#include "vital/synth.hpp"
#include "vital/tool_registry.hpp"

namespace testing_support {

std::filesystem::path data_dir();

/// Unique directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Replays canned replies in order and records every prompt. A reply of
/// "<timeout>" throws BackendTimeout, "<error>" throws BackendError.
class ScriptedClient : public vital::CompletionClient {
 public:
  explicit ScriptedClient(std::vector<std::string> replies) : replies_(replies.begin(), replies.end()) {}
  std::string complete(const vital::CompletionRequest& req) override;
  const std::vector<std::string>& prompts() const { return prompts_; }

 private:
  std::deque<std::string> replies_;
  std::vector<std::string> prompts_;
};

struct Stream {
  std::vector<vital::SampleWindow> windows;
  std::vector<vital::Annotation> annotations;
};

struct StreamOptions {
  double fs = 250.0;
  vital::Modality modality = vital::Modality::ECG;
  double window_s = 10.0;
  std::string patient_id = "p0";
  vital::Dataset dataset = vital::Dataset::synthetic;
};

Stream make_stream(const vital::StreamScript& script, const StreamOptions& opt = {});

/// Script file under data/scripts, with its stream options.
std::pair<vital::StreamScript, StreamOptions> load_script(const std::string& name);

/// data/scripts/qa_fixture.json rendered, monitored and turned into QA.
struct QAFixture {
  vital::MonitorConfig cfg;
  vital::WindowStore windows;
  vital::StateStore states;  // with hidden annotations
  vital::StateStore fair;
  std::map<std::string, vital::PatientMemory> memories;
  std::vector<vital::QAExample> examples;
  std::vector<std::string> generation_report;
};

const QAFixture& qa_fixture();

/// Three ten-minute records: "ecg1" (icentia11k ECG, 70 bpm with a 160 bpm
/// burst over [300, 400)), "af1" (af_ppg_ecg ECG, AF over [200, 500)) and
/// "ppg1" (ppg_dalia PPG at 75 bpm, 60-s windows), monitored with the
/// default config. `states` is the leakage-filtered view.
struct SmallWorld {
  vital::MonitorConfig cfg;
  vital::WindowStore windows;
  vital::StateStore states;
  std::map<std::string, vital::PatientMemory> memories;
  vital::FixtureKnowledgeClient knowledge;
  vital::StateStore scratch;

  SmallWorld();
  vital::ToolContext ctx();
};

SmallWorld& small_world();

/// 1,862 ids over eight (dataset, tier) strata of sizes 278 x 4, 200 x 3
/// and 150.
std::vector<vital::SplitItem> split_fixture();

/// The built-in registry with some handlers swapped for test doubles.
/// Descriptors are unchanged, so validation sees the real contracts.
vital::ToolRegistry registry_with_overrides(const std::map<std::string, vital::ToolHandler>& overrides);

/// Handler that always fails with `message`.
vital::ToolHandler failing_handler(std::string message);

}  // namespace testing_support
