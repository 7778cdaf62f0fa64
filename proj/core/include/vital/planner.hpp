#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "vital/agent.hpp"
#include "vital/llm_client.hpp"

namespace vital {

/// Routing table keyed on (target, modality, tier); keyword matching when
/// the query has no target. Replanning swaps each failed step for its
/// modality counterpart.
class DeterministicPlanner : public Planner {
 public:
  Plan plan(const Query& q, const ToolRegistry& registry) override;
  Plan replan(const Query& q, const Plan& previous, const ValidationReport& report,
              const ToolRegistry& registry) override;
};

/// Counterpart tool used by replanning (analyze_heart_rate <->
/// analyze_pulse_rate and so on); nullopt when the tool has none.
std::optional<std::string> alternative_tool(std::string_view tool);

/// Parses {"steps": [{"tool", "args", "purpose"}]} and checks every tool
/// against the registry's allow list. Throws PlanRejected with the reason.
Plan parse_plan(std::string_view text, const ToolRegistry& registry, PlanOrigin origin);

/// Renders the planner and replan prompts and parses the reply. A bad
/// reply gets one reprompt; a second failure, or any backend error, falls
/// back to the deterministic planner and records why in diagnostics.
class LlmPlanner : public Planner {
 public:
  explicit LlmPlanner(CompletionClient& client) : client_(client) {}
  Plan plan(const Query& q, const ToolRegistry& registry) override;
  Plan replan(const Query& q, const Plan& previous, const ValidationReport& report,
              const ToolRegistry& registry) override;

  std::string plan_prompt(const Query& q, const ToolRegistry& registry) const;
  std::string replan_prompt(const Plan& previous, const ValidationReport& report,
                            const ToolRegistry& registry) const;

 private:
  Plan ask(const std::string& prompt, const ToolRegistry& registry, PlanOrigin origin,
           std::vector<std::string>& diagnostics);

  CompletionClient& client_;
  DeterministicPlanner fallback_;
};

}  // namespace vital
