#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vital/query.hpp"
#include "vital/tool_registry.hpp"

namespace vital {

enum class PlanOrigin { llm, deterministic, replanned };
std::string_view to_string(PlanOrigin o);

struct PlanStep {
  std::string tool_name;
  nlohmann::json args = nlohmann::json::object();
  std::string purpose;
  bool operator==(const PlanStep&) const = default;
};

struct Plan {
  std::vector<PlanStep> steps;
  PlanOrigin origin = PlanOrigin::deterministic;
  std::vector<std::string> diagnostics;  // planner fallbacks and notes
};

void to_json(nlohmann::json& j, const PlanStep& s);
void to_json(nlohmann::json& j, const Plan& p);

/// Thrown when a plan names a tool outside the allow list.
class PlanRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws PlanRejected unless every step uses an allowed tool.
void check_allowed(const Plan& plan, const ToolRegistry& registry);

enum class IssueKind { completeness, tool_success, required_fields, consistency };
std::string_view to_string(IssueKind k);

struct ValidationIssue {
  IssueKind kind = IssueKind::completeness;
  std::size_t step = 0;
  std::optional<std::size_t> other_step;  // set for pairwise consistency issues
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool passed() const { return issues.empty(); }
  std::size_t count(IssueKind k) const;
};

void to_json(nlohmann::json& j, const ValidationReport& r);

struct ConsistencyConfig {
  double hr_abs_bpm = 10.0;
  double hr_rel = 0.10;
};

/// `results[i]` belongs to step i; a short vector or an empty slot is a
/// missing result.
ValidationReport validate(const Plan& plan, std::span<const std::optional<ToolResult>> results,
                          const ToolRegistry& registry, const ConsistencyConfig& cfg = {});

class Planner {
 public:
  virtual ~Planner() = default;
  virtual Plan plan(const Query& q, const ToolRegistry& registry) = 0;
  virtual Plan replan(const Query& q, const Plan& previous, const ValidationReport& report,
                      const ToolRegistry& registry) = 0;
};

struct Answer {
  std::string text;
  nlohmann::json evidence = nlohmann::json::array();  // digests of the results used
  std::vector<std::string> diagnostics;
};

class Responder {
 public:
  virtual ~Responder() = default;
  virtual Answer compose(const Query& q, const Plan& plan, std::span<const std::optional<ToolResult>> results) = 0;
};

struct AgentConfig {
  int replan_budget = 1;
  ConsistencyConfig consistency;
};

struct AgentResult {
  Answer answer;
  std::vector<Plan> plans;
  std::vector<ValidationReport> reports;
  std::vector<std::string> executed_tools;
  int cycles = 0;
  int replans = 0;
  bool flagged = false;  // answered on evidence that never passed validation
};

void to_json(nlohmann::json& j, const AgentResult& r);

/// plan -> execute -> validate -> (replan) -> compose. Runs at most
/// 1 + replan_budget plan-execute cycles.
class Agent {
 public:
  Agent(const ToolRegistry& registry, ToolContext ctx, Planner& planner, Responder& responder, AgentConfig cfg = {});
  AgentResult run(const Query& q) const;

 private:
  const ToolRegistry& registry_;
  ToolContext ctx_;
  Planner& planner_;
  Responder& responder_;
  AgentConfig cfg_;
};

}  // namespace vital
