#include "vital/agent.hpp"

#include <algorithm>
#include <cmath>

namespace vital {

using nlohmann::json;

std::string_view to_string(PlanOrigin o) {
  switch (o) {
    case PlanOrigin::llm: return "llm";
    case PlanOrigin::deterministic: return "deterministic";
    case PlanOrigin::replanned: return "replanned";
  }
  return "deterministic";
}

void to_json(json& j, const PlanStep& s) { j = {{"tool", s.tool_name}, {"args", s.args}, {"purpose", s.purpose}}; }

void to_json(json& j, const Plan& p) {
  j = {{"steps", p.steps}, {"origin", std::string(to_string(p.origin))}};
  if (!p.diagnostics.empty()) j["diagnostics"] = p.diagnostics;
}

void check_allowed(const Plan& plan, const ToolRegistry& registry) {
  const auto allowed = registry.allowed_tool_names();
  for (const auto& s : plan.steps) {
    if (!std::binary_search(allowed.begin(), allowed.end(), s.tool_name)) {
      throw PlanRejected("tool not in the allowed list: " + s.tool_name);
    }
  }
}

std::string_view to_string(IssueKind k) {
  switch (k) {
    case IssueKind::completeness: return "completeness";
    case IssueKind::tool_success: return "tool_success";
    case IssueKind::required_fields: return "required_fields";
    case IssueKind::consistency: return "consistency";
  }
  return "completeness";
}

std::size_t ValidationReport::count(IssueKind k) const {
  return static_cast<std::size_t>(
      std::count_if(issues.begin(), issues.end(), [k](const ValidationIssue& i) { return i.kind == k; }));
}

void to_json(json& j, const ValidationReport& r) {
  json issues = json::array();
  for (const auto& i : r.issues) {
    json e = {{"dimension", std::string(to_string(i.kind))}, {"message", i.message}};
    if (i.other_step) {
      e["pair"] = {i.step, *i.other_step};
    } else {
      e["step_index"] = i.step;
    }
    issues.push_back(std::move(e));
  }
  j = {{"passed", r.passed()}, {"issues", issues}};
}

namespace {

std::optional<double> hr_of(const json& payload) {
  for (const char* key : {"hr_bpm", "pulse_rate_bpm"}) {
    if (payload.contains(key) && payload[key].is_number()) return payload[key].get<double>();
  }
  return std::nullopt;
}

std::optional<bool> af_of(const json& payload) {
  if (payload.contains("af_detected") && payload["af_detected"].is_boolean()) return payload["af_detected"].get<bool>();
  return std::nullopt;
}

}  // namespace

ValidationReport validate(const Plan& plan, std::span<const std::optional<ToolResult>> results,
                          const ToolRegistry& registry, const ConsistencyConfig& cfg) {
  ValidationReport report;
  std::vector<std::pair<std::size_t, double>> hrs;
  std::vector<std::pair<std::size_t, bool>> afs;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& step = plan.steps[i];
    if (i >= results.size() || !results[i]) {
      report.issues.push_back({IssueKind::completeness, i, std::nullopt, "no result for step " + step.tool_name});
      continue;
    }
    const ToolResult& r = *results[i];
    if (!r.ok()) {
      if (!r.missing_fields.empty()) {
        std::string fields;
        for (const auto& f : r.missing_fields) fields += (fields.empty() ? "" : ", ") + f;
        report.issues.push_back({IssueKind::required_fields, i, std::nullopt,
                                 r.tool_name + " dropped required fields: " + fields});
      } else {
        report.issues.push_back({IssueKind::tool_success, i, std::nullopt,
                                 r.tool_name + " failed (" + r.error_code + "): " + r.message});
      }
      continue;
    }
    if (const auto* d = registry.descriptor(r.tool_name)) {
      std::vector<std::string> missing;
      for (const auto& f : d->required_output_fields) {
        if (!r.payload.contains(f)) missing.push_back(f);
      }
      if (!missing.empty()) {
        std::string fields;
        for (const auto& f : missing) fields += (fields.empty() ? "" : ", ") + f;
        report.issues.push_back({IssueKind::required_fields, i, std::nullopt,
                                 r.tool_name + " lacks required fields: " + fields});
        continue;
      }
    }
    if (auto hr = hr_of(r.payload)) hrs.emplace_back(i, *hr);
    if (auto af = af_of(r.payload)) afs.emplace_back(i, *af);
  }
  for (std::size_t a = 0; a < hrs.size(); ++a) {
    for (std::size_t b = a + 1; b < hrs.size(); ++b) {
      const double x = hrs[a].second, y = hrs[b].second;
      const double tol = std::max(cfg.hr_abs_bpm, cfg.hr_rel * std::max(std::abs(x), std::abs(y)));
      if (std::abs(x - y) > tol) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "heart-rate estimates disagree: %.1f vs %.1f bpm", x, y);
        report.issues.push_back({IssueKind::consistency, hrs[a].first, hrs[b].first, buf});
      }
    }
  }
  for (std::size_t a = 0; a < afs.size(); ++a) {
    for (std::size_t b = a + 1; b < afs.size(); ++b) {
      if (afs[a].second != afs[b].second) {
        report.issues.push_back({IssueKind::consistency, afs[a].first, afs[b].first, "rhythm evidence contradicts"});
      }
    }
  }
  return report;
}

void to_json(json& j, const AgentResult& r) {
  json reports = json::array();
  for (const auto& rep : r.reports) reports.push_back(rep);
  j = {{"answer", r.answer.text},
       {"evidence", r.answer.evidence},
       {"plans", r.plans},
       {"reports", reports},
       {"executed_tools", r.executed_tools},
       {"cycles", r.cycles},
       {"replans", r.replans},
       {"flagged", r.flagged}};
  if (!r.answer.diagnostics.empty()) j["diagnostics"] = r.answer.diagnostics;
}

Agent::Agent(const ToolRegistry& registry, ToolContext ctx, Planner& planner, Responder& responder, AgentConfig cfg)
    : registry_(registry), ctx_(ctx), planner_(planner), responder_(responder), cfg_(cfg) {}

AgentResult Agent::run(const Query& q) const {
  q.validate();
  AgentResult out;
  Plan plan = planner_.plan(q, registry_);
  std::vector<std::optional<ToolResult>> results;
  while (true) {
    check_allowed(plan, registry_);
    results.clear();
    for (const auto& step : plan.steps) {
      out.executed_tools.push_back(step.tool_name);
      results.emplace_back(registry_.invoke(step.tool_name, step.args, ctx_));
    }
    ++out.cycles;
    ValidationReport report = validate(plan, results, registry_, cfg_.consistency);
    const bool passed = report.passed();
    out.plans.push_back(plan);
    out.reports.push_back(std::move(report));
    if (passed) break;
    if (out.replans >= cfg_.replan_budget) {
      out.flagged = true;
      break;
    }
    plan = planner_.replan(q, out.plans.back(), out.reports.back(), registry_);
    ++out.replans;
  }
  out.answer = responder_.compose(q, out.plans.back(), results);
  return out;
}

}  // namespace vital
