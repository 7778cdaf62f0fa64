#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vital/agent.hpp"
#include "vital/planner.hpp"
#include "vital/responder.hpp"

using namespace vital;
using testing_support::failing_handler;
using testing_support::registry_with_overrides;
using testing_support::ScriptedClient;
using testing_support::small_world;

namespace {

Query hr_query(const std::string& pid = "ecg1", Dataset ds = Dataset::icentia11k, double t0 = 100.0,
               double t1 = 110.0) {
  Query q;
  q.text = "What is the heart rate in this window?";
  q.locator = WindowLocator{ds, pid, t0, t1};
  q.tier = Tier::A;
  q.qtype = QType::single_query;
  q.target = std::string(targets::hr_current);
  return q;
}

ToolResult ok_result(const std::string& tool, nlohmann::json payload) {
  ToolResult r;
  r.tool_name = tool;
  r.payload = std::move(payload);
  return r;
}

Plan plan_of(std::initializer_list<const char*> tools) {
  Plan p;
  for (const char* t : tools) p.steps.push_back({t, nlohmann::json::object(), ""});
  return p;
}

}  // namespace

TEST(Validator, CleanRunPasses) {
  auto reg = make_builtin_registry();
  auto p = plan_of({"analyze_heart_rate"});
  std::vector<std::optional<ToolResult>> rs{
      ok_result("analyze_heart_rate", {{"hr_bpm", 70.0}, {"n_beats", 12}, {"signal_quality_score", 1.0}})};
  EXPECT_TRUE(validate(p, rs, reg).passed());
}

TEST(Validator, CompletenessForMissingResults) {
  auto reg = make_builtin_registry();
  auto p = plan_of({"analyze_heart_rate", "analyze_hrv"});
  std::vector<std::optional<ToolResult>> rs{std::nullopt};
  auto rep = validate(p, rs, reg);
  EXPECT_EQ(rep.count(IssueKind::completeness), 2u);
  EXPECT_EQ(rep.issues.size(), 2u);
}

TEST(Validator, ToolSuccessForPlainErrors) {
  auto reg = make_builtin_registry();
  auto p = plan_of({"analyze_heart_rate"});
  ToolResult err;
  err.tool_name = "analyze_heart_rate";
  err.status = ToolStatus::error;
  err.error_code = "tool_failure";
  std::vector<std::optional<ToolResult>> rs{err};
  auto rep = validate(p, rs, reg);
  ASSERT_EQ(rep.issues.size(), 1u);
  EXPECT_EQ(rep.issues[0].kind, IssueKind::tool_success);
}

TEST(Validator, RequiredFieldsForDroppedOrAbsentFields) {
  auto reg = make_builtin_registry();
  auto p = plan_of({"analyze_heart_rate", "analyze_hrv"});
  ToolResult dropped;
  dropped.tool_name = "analyze_heart_rate";
  dropped.status = ToolStatus::error;
  dropped.error_code = "tool_failure";
  dropped.missing_fields = {"hr_bpm"};
  std::vector<std::optional<ToolResult>> rs{dropped, ok_result("analyze_hrv", {{"sdnn_ms", 40.0}})};
  auto rep = validate(p, rs, reg);
  EXPECT_EQ(rep.count(IssueKind::required_fields), 2u);
  EXPECT_EQ(rep.count(IssueKind::tool_success), 0u);
}

TEST(Validator, ConsistencyOnHeartRatePairs) {
  auto reg = make_builtin_registry();
  auto p = plan_of({"analyze_heart_rate", "analyze_pulse_rate"});
  auto run = [&](double a, double b) {
    std::vector<std::optional<ToolResult>> rs{
        ok_result("analyze_heart_rate", {{"hr_bpm", a}, {"n_beats", 1}, {"signal_quality_score", 1.0}}),
        ok_result("analyze_pulse_rate", {{"pulse_rate_bpm", b}, {"n_beats", 1}, {"signal_quality_score", 1.0}})};
    return validate(p, rs, reg);
  };
  EXPECT_TRUE(run(70.0, 80.0).passed());    // 10 bpm is within the absolute floor
  EXPECT_FALSE(run(70.0, 80.5).passed());
  EXPECT_TRUE(run(150.0, 165.0).passed());  // 10% of 165 = 16.5
  auto rep = run(150.0, 167.0);
  ASSERT_EQ(rep.issues.size(), 1u);
  EXPECT_EQ(rep.issues[0].kind, IssueKind::consistency);
  EXPECT_EQ(rep.issues[0].step, 0u);
  EXPECT_EQ(rep.issues[0].other_step, 1u);
}

TEST(Validator, ConsistencyOnRhythmContradiction) {
  auto reg = make_builtin_registry();
  auto p = plan_of({"ecg_diagnosis", "analyze_af_ppg_ecg_rhythm_context"});
  std::vector<std::optional<ToolResult>> rs{
      ok_result("ecg_diagnosis", {{"rhythm_class", "AF"}, {"af_detected", true}, {"evidence", {}}}),
      ok_result("analyze_af_ppg_ecg_rhythm_context",
                {{"af_burden", 0.0}, {"af_windows", 0}, {"total_windows", 3}, {"af_detected", false}})};
  EXPECT_EQ(validate(p, rs, reg).count(IssueKind::consistency), 1u);
}

TEST(Validator, ReportJsonShape) {
  ValidationReport rep;
  rep.issues.push_back({IssueKind::consistency, 0, 2, "x"});
  rep.issues.push_back({IssueKind::tool_success, 1, std::nullopt, "y"});
  nlohmann::json j = rep;
  EXPECT_EQ(j["passed"], false);
  EXPECT_EQ(j["issues"][0]["pair"], (nlohmann::json{0, 2}));
  EXPECT_EQ(j["issues"][1]["step_index"], 1);
  EXPECT_EQ(j["issues"][1]["dimension"], "tool_success");
}

TEST(AgentLoop, AnswersHeartRateInOneCycle) {
  auto reg = make_builtin_registry();
  DeterministicPlanner planner;
  DeterministicResponder responder;
  Agent agent(reg, small_world().ctx(), planner, responder);
  auto r = agent.run(hr_query());
  EXPECT_EQ(r.cycles, 1);
  EXPECT_EQ(r.replans, 0);
  EXPECT_FALSE(r.flagged);
  EXPECT_EQ(r.answer.text, "70 bpm");
  EXPECT_FALSE(r.answer.evidence.empty());
}

TEST(AgentLoop, FailingToolTriggersOneReplan) {
  auto reg = registry_with_overrides({{"analyze_heart_rate", failing_handler("injected failure")}});
  DeterministicPlanner planner;
  DeterministicResponder responder;
  Agent agent(reg, small_world().ctx(), planner, responder);
  auto r = agent.run(hr_query());
  ASSERT_EQ(r.reports.size(), 2u);
  EXPECT_EQ(r.reports[0].count(IssueKind::tool_success), 1u);
  EXPECT_TRUE(r.reports[1].passed());
  EXPECT_EQ(r.replans, 1);
  EXPECT_EQ(r.cycles, 2);
  EXPECT_EQ(r.plans[1].origin, PlanOrigin::replanned);
  EXPECT_EQ(r.plans[1].steps[1].tool_name, "analyze_pulse_rate");
  EXPECT_FALSE(r.flagged);
  EXPECT_EQ(r.answer.text, "70 bpm");
}

TEST(AgentLoop, BudgetExhaustionFlagsTheAnswer) {
  auto reg = registry_with_overrides({{"analyze_heart_rate", failing_handler("down")},
                                      {"analyze_pulse_rate", failing_handler("down too")}});
  DeterministicPlanner planner;
  DeterministicResponder responder;
  Agent agent(reg, small_world().ctx(), planner, responder);
  auto r = agent.run(hr_query());
  EXPECT_EQ(r.cycles, 2);
  EXPECT_EQ(r.replans, 1);
  EXPECT_TRUE(r.flagged);
  // The loader's own estimate is still usable evidence.
  EXPECT_EQ(r.answer.text, "70 bpm");

  Agent strict(reg, small_world().ctx(), planner, responder, AgentConfig{0, {}});
  auto s = strict.run(hr_query());
  EXPECT_EQ(s.cycles, 1);
  EXPECT_TRUE(s.flagged);
}

TEST(AgentLoop, DroppedFieldReachesValidatorAsRequiredFields) {
  auto reg = registry_with_overrides({{"analyze_heart_rate", [](const nlohmann::json&, const ToolContext&) {
                                         return nlohmann::json{{"n_beats", 3}, {"signal_quality_score", 1.0}};
                                       }}});
  DeterministicPlanner planner;
  DeterministicResponder responder;
  Agent agent(reg, small_world().ctx(), planner, responder);
  auto r = agent.run(hr_query());
  EXPECT_EQ(r.reports[0].count(IssueKind::required_fields), 1u);
  EXPECT_EQ(r.replans, 1);
}

TEST(AgentLoop, LlmPlanOutsideAllowListFallsBack) {
  auto reg = make_builtin_registry();
  ScriptedClient client({R"({"steps": [{"tool": "state_build_from_ecg_record", "args": {"patient_id": "ecg1"}}]})",
                         R"({"steps": [{"tool": "invented_tool"}]})"});
  LlmPlanner planner(client);
  DeterministicResponder responder;
  Agent agent(reg, small_world().ctx(), planner, responder);
  auto r = agent.run(hr_query());
  EXPECT_EQ(client.prompts().size(), 2u);
  EXPECT_EQ(r.plans[0].origin, PlanOrigin::deterministic);
  EXPECT_EQ(r.answer.text, "70 bpm");
  EXPECT_FALSE(r.plans[0].diagnostics.empty());
}

TEST(AgentLoop, ResultJsonCarriesTrace) {
  auto reg = make_builtin_registry();
  DeterministicPlanner planner;
  DeterministicResponder responder;
  Agent agent(reg, small_world().ctx(), planner, responder);
  nlohmann::json j = agent.run(hr_query());
  EXPECT_EQ(j["cycles"], 1);
  EXPECT_EQ(j["plans"][0]["steps"][1]["tool"], "analyze_heart_rate");
  EXPECT_EQ(j["reports"][0]["passed"], true);
}
