#include "vital/planner.hpp"

#include <algorithm>

#include "vital/builtin_tools.hpp"
#include "vital/error.hpp"
#include "vital/prompts.hpp"

namespace vital {

using nlohmann::json;

namespace {

std::string loader_for(Dataset d) {
  switch (d) {
    case Dataset::ppg_dalia: return "analyze_ppg_dalia_window_signal";
    case Dataset::wesad: return "analyze_wesad_window_signal";
    default: return "analyze_icentia11k_ecg_window_signal";
  }
}

std::vector<PlanStep> route(const std::string& target, const WindowLocator& loc) {
  const json args = loc;
  const bool ppg = dataset_default_modality(loc.dataset) == Modality::PPG;
  const PlanStep load{loader_for(loc.dataset), args, "load the requested window"};
  const PlanStep window{"state_get_monitoring_window", args, "collect monitoring states over the interval"};

  if (target == targets::hr_current || target == targets::tachycardia_current ||
      target == targets::hr_category_current) {
    return {load, {ppg ? "analyze_pulse_rate" : "analyze_heart_rate", args, "estimate the window heart rate"}};
  }
  if (target == targets::sdnn_current) {
    return {load, {ppg ? "analyze_prv" : "analyze_hrv", args, "compute time-domain variability"}};
  }
  if (target == targets::af_presence_current) {
    return {load, {ppg ? "analyze_ppg_rhythm_irregularity" : "ecg_diagnosis", args, "screen the window rhythm"}};
  }
  if (target == targets::af_burden || target == targets::af_any) {
    return {window, {"analyze_af_ppg_ecg_rhythm_context", args, "screen each window and aggregate AF burden"}};
  }
  if (target == targets::max_hr || target == targets::mean_hr || target == targets::hr_increase) {
    return {window};
  }
  return {{"state_get_dataset_capabilities", {{"dataset", loc.dataset}}, "check what the dataset supports"}};
}

}  // namespace

std::optional<std::string> alternative_tool(std::string_view tool) {
  static const std::map<std::string, std::string, std::less<>> pairs{
      {"analyze_heart_rate", "analyze_pulse_rate"},
      {"analyze_pulse_rate", "analyze_heart_rate"},
      {"analyze_hrv", "analyze_prv"},
      {"analyze_prv", "analyze_hrv"},
      {"ecg_diagnosis", "analyze_af_ppg_ecg_rhythm_context"},
      {"analyze_ppg_rhythm_irregularity", "analyze_af_ppg_ecg_rhythm_context"},
      {"analyze_af_ppg_ecg_rhythm_context", "ecg_diagnosis"},
      {"assess_signal_quality", "assess_ppg_signal_quality"},
      {"assess_ppg_signal_quality", "assess_signal_quality"},
  };
  auto it = pairs.find(tool);
  if (it == pairs.end()) return std::nullopt;
  return it->second;
}

Plan DeterministicPlanner::plan(const Query& q, const ToolRegistry& registry) {
  if (registry.size() == 0) throw ConfigError("planner needs a non-empty tool registry");
  Plan p;
  p.origin = PlanOrigin::deterministic;
  if (!q.locator) {
    p.steps.push_back({"state_list_contexts", json::object(), "no window locator; list what is available"});
    p.diagnostics.push_back("query has no locator");
    return p;
  }
  auto target = q.target ? q.target : infer_target(q.text);
  if (!target) p.diagnostics.push_back("no target matched; checking dataset capabilities");
  p.steps = route(target.value_or(""), *q.locator);
  return p;
}

Plan DeterministicPlanner::replan(const Query&, const Plan& previous, const ValidationReport& report,
                                  const ToolRegistry& registry) {
  Plan p = previous;
  p.origin = PlanOrigin::replanned;
  p.diagnostics.clear();
  for (const auto& issue : report.issues) {
    std::size_t idx = issue.step;
    if (issue.kind == IssueKind::completeness) continue;
    if (issue.kind == IssueKind::consistency && issue.other_step) idx = *issue.other_step;
    if (idx >= p.steps.size()) continue;
    auto& step = p.steps[idx];
    if (auto alt = alternative_tool(previous.steps[idx].tool_name); alt && registry.has(*alt)) {
      p.diagnostics.push_back("step " + std::to_string(idx) + ": " + step.tool_name + " -> " + *alt);
      step.tool_name = *alt;
      step.purpose += " (substituted after validation failure)";
    }
  }
  return p;
}

Plan parse_plan(std::string_view text, const ToolRegistry& registry, PlanOrigin origin) {
  json j;
  try {
    j = json::parse(strip_code_fence(text));
  } catch (const json::parse_error& e) {
    throw PlanRejected(std::string("plan is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("steps") || !j["steps"].is_array()) {
    throw PlanRejected("plan must be an object with a steps array");
  }
  Plan p;
  p.origin = origin;
  for (const auto& s : j["steps"]) {
    if (!s.is_object() || !s.contains("tool") || !s["tool"].is_string()) {
      throw PlanRejected("every step needs a string tool field");
    }
    PlanStep step;
    step.tool_name = s["tool"].get<std::string>();
    if (s.contains("args")) {
      if (!s["args"].is_object()) throw PlanRejected("args of " + step.tool_name + " must be an object");
      step.args = s["args"];
    }
    if (s.contains("purpose") && s["purpose"].is_string()) step.purpose = s["purpose"].get<std::string>();
    p.steps.push_back(std::move(step));
  }
  check_allowed(p, registry);
  return p;
}

std::string LlmPlanner::plan_prompt(const Query& q, const ToolRegistry& registry) const {
  std::string names;
  for (const auto& n : registry.allowed_tool_names()) names += "- " + n + "\n";
  return prompts::render(prompts::kPlanner, {{"query", q.text},
                                             {"locator", q.locator ? json(*q.locator).dump() : "none"},
                                             {"tool_names", names},
                                             {"tools_description", registry.tools_description()}});
}

std::string LlmPlanner::replan_prompt(const Plan& previous, const ValidationReport& report,
                                      const ToolRegistry& registry) const {
  std::string names;
  for (const auto& n : registry.allowed_tool_names()) names += "- " + n + "\n";
  std::string issues;
  for (const auto& i : report.issues) issues += "- [" + std::string(to_string(i.kind)) + "] " + i.message + "\n";
  return prompts::render(prompts::kReplan, {{"previous_plan", json(previous).dump(2)},
                                            {"issues", issues},
                                            {"tool_names", names},
                                            {"tools_description", registry.tools_description()}});
}

Plan LlmPlanner::ask(const std::string& prompt, const ToolRegistry& registry, PlanOrigin origin,
                     std::vector<std::string>& diagnostics) {
  std::string current = prompt;
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      return parse_plan(client_.complete({current}), registry, origin);
    } catch (const PlanRejected& e) {
      diagnostics.push_back(std::string("planner reply rejected: ") + e.what());
      current = prompt + "\n\nYour previous reply was rejected (" + e.what() +
                "). Return ONLY valid JSON using allowed tool names.\n";
    }
  }
  throw PlanRejected("planner reply rejected twice");
}

Plan LlmPlanner::plan(const Query& q, const ToolRegistry& registry) {
  std::vector<std::string> diag;
  try {
    Plan p = ask(plan_prompt(q, registry), registry, PlanOrigin::llm, diag);
    p.diagnostics = std::move(diag);
    return p;
  } catch (const std::exception& e) {
    diag.push_back(std::string("fell back to deterministic planner: ") + e.what());
  }
  Plan p = fallback_.plan(q, registry);
  p.diagnostics.insert(p.diagnostics.begin(), diag.begin(), diag.end());
  return p;
}

Plan LlmPlanner::replan(const Query& q, const Plan& previous, const ValidationReport& report,
                        const ToolRegistry& registry) {
  std::vector<std::string> diag;
  try {
    Plan p = ask(replan_prompt(previous, report, registry), registry, PlanOrigin::replanned, diag);
    p.diagnostics = std::move(diag);
    return p;
  } catch (const std::exception& e) {
    diag.push_back(std::string("fell back to deterministic replan: ") + e.what());
  }
  Plan p = fallback_.replan(q, previous, report, registry);
  p.diagnostics.insert(p.diagnostics.begin(), diag.begin(), diag.end());
  return p;
}

}  // namespace vital
