#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vital/guidelines.hpp"
#include "vital/llm_client.hpp"
#include "vital/rules.hpp"
#include "vital/state.hpp"

namespace vital {

struct JudgeSnapshot {
  std::optional<double> hr_bpm;
  std::optional<std::string> rhythm_class;
  std::optional<double> af_episode_duration_s;
  std::optional<double> tachycardia_ratio_5min;
  std::size_t tachycardia_sample_count = 0;
  bool operator==(const JudgeSnapshot&) const = default;
};

void to_json(nlohmann::json& j, const JudgeSnapshot& s);
void from_json(const nlohmann::json& j, JudgeSnapshot& s);

struct JudgeDecision {
  bool intervene = false;
  Urgency urgency = Urgency::none;
  std::string reason;
  std::string advice;
  std::vector<GuidelineRef> cited_sections;
  bool operator==(const JudgeDecision&) const = default;
};

void to_json(nlohmann::json& j, const JudgeDecision& d);

struct JudgeDiagnostics {
  int tool_calls = 0;           // executed read_guideline_section calls
  int rejected_tool_calls = 0;  // calls beyond the budget or malformed
  bool malformed_output = false;
  bool backend_failure = false;
  std::vector<std::string> notes;
};

void to_json(nlohmann::json& j, const JudgeDiagnostics& d);

struct JudgeOutcome {
  JudgeDecision decision;
  JudgeDiagnostics diagnostics;
};

struct JudgeConfig {
  int max_tool_calls = 3;
  int max_turns = 8;  // hard stop on backend round trips
  std::string signal_phrase = "single-lead ECG";
  std::string safe_advice = "Consider consulting a healthcare professional.";
};

/// Phrases in `advice` that recommend medication changes or state a
/// diagnosis. Empty means the advice passes.
std::vector<std::string> lint_advice(std::string_view advice);

/// Full judge prompt for a snapshot, before any tool exchange.
std::string judge_prompt(const JudgeSnapshot& snapshot, const GuidelineStore& guidelines, const JudgeConfig& cfg,
                         const nlohmann::json& patient_context);

/// Runs one checkpoint against `backend`. Never throws for backend
/// trouble: timeouts, transport errors and malformed replies come back as
/// a non-intervention with diagnostics set.
JudgeOutcome judge_checkpoint(const JudgeSnapshot& snapshot, const GuidelineStore& guidelines,
                              CompletionClient& backend, const JudgeConfig& cfg = {},
                              const nlohmann::json& patient_context = nlohmann::json::object());

/// Deterministic stand-in for the hosted judge. Reads the snapshot out of
/// the prompt and intervenes iff the AF run exceeds `af_min_duration_s`
/// (medium) or a rule condition holds on the snapshot (high for extremes,
/// medium for sustained tachycardia). Reads the cited section once before
/// deciding.
class MockJudgeBackend : public CompletionClient {
 public:
  explicit MockJudgeBackend(RuleConfig rules = {}, double af_min_duration_s = 300.0);
  std::string complete(const CompletionRequest& req) override;
  int calls() const { return calls_; }

 private:
  RuleConfig rules_;
  double af_min_duration_s_;
  int calls_ = 0;
};

}  // namespace vital
