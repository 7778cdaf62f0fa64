#include "vital/judge.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "vital/error.hpp"
#include "vital/prompts.hpp"

namespace vital {

namespace {

constexpr std::string_view kSnapshotMarker = "## Snapshot\n";
constexpr std::string_view kToolResultMarker = "## Tool result\n";

constexpr std::array kMedicationPhrases{
    "medication", "medicine", "dose",         "dosage",      "pill",      "prescri",
    "anticoagul", "blood thinner", "beta blocker", "beta-blocker", "aspirin", "stop taking",
    "start taking"};
constexpr std::array kDiagnosisPhrases{"you have atrial", "you have a ", "you have an ", "diagnos",
                                       "you are suffering", "you suffer from"};

const char* kToolFormat =
    "\n\n## Tool call format\n"
    "To call the tool, reply with only "
    "{\"tool\": \"read_guideline_section\", \"arguments\": {\"guideline_id\": \"...\", \"section_id\": \"...\"}}";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

JudgeOutcome quiet(JudgeDiagnostics d) { return {JudgeDecision{}, std::move(d)}; }

// Returns the decision, or nullopt with a note when the object is not one.
std::optional<JudgeDecision> parse_decision(const nlohmann::json& j, std::string& why) {
  auto it = j.find("intervene");
  if (it == j.end() || !it->is_boolean()) {
    why = "decision lacks boolean 'intervene'";
    return std::nullopt;
  }
  JudgeDecision d;
  d.intervene = it->get<bool>();
  try {
    d.urgency = parse_urgency(j.value("urgency", std::string("none")));
    d.reason = j.value("reason", std::string());
    d.advice = j.value("advice", std::string());
    if (auto c = j.find("cited_sections"); c != j.end() && !c->is_null()) {
      d.cited_sections = c->get<std::vector<GuidelineRef>>();
    }
  } catch (const std::exception& e) {
    why = std::string("decision field error: ") + e.what();
    return std::nullopt;
  }
  return d;
}

std::string fmt0(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f", v);
  return buf;
}

}  // namespace

void to_json(nlohmann::json& j, const JudgeSnapshot& s) {
  j = {{"hr_bpm", s.hr_bpm},
       {"rhythm_class", s.rhythm_class},
       {"af_episode_duration_s", s.af_episode_duration_s},
       {"tachycardia_ratio_5min", s.tachycardia_ratio_5min},
       {"tachycardia_sample_count", s.tachycardia_sample_count}};
}

void from_json(const nlohmann::json& j, JudgeSnapshot& s) {
  s.hr_bpm = j.at("hr_bpm").get<std::optional<double>>();
  s.rhythm_class = j.at("rhythm_class").get<std::optional<std::string>>();
  s.af_episode_duration_s = j.at("af_episode_duration_s").get<std::optional<double>>();
  s.tachycardia_ratio_5min = j.at("tachycardia_ratio_5min").get<std::optional<double>>();
  s.tachycardia_sample_count = j.at("tachycardia_sample_count").get<std::size_t>();
}

void to_json(nlohmann::json& j, const JudgeDecision& d) {
  j = {{"intervene", d.intervene},
       {"urgency", d.urgency},
       {"reason", d.reason},
       {"advice", d.advice},
       {"cited_sections", d.cited_sections}};
}

void to_json(nlohmann::json& j, const JudgeDiagnostics& d) {
  j = {{"tool_calls", d.tool_calls},
       {"rejected_tool_calls", d.rejected_tool_calls},
       {"malformed_output", d.malformed_output},
       {"backend_failure", d.backend_failure},
       {"notes", d.notes}};
}

std::vector<std::string> lint_advice(std::string_view advice) {
  const std::string a = lower(advice);
  std::vector<std::string> hits;
  for (const char* p : kMedicationPhrases) {
    if (a.find(p) != std::string::npos) hits.emplace_back(p);
  }
  for (const char* p : kDiagnosisPhrases) {
    if (a.find(p) != std::string::npos) hits.emplace_back(p);
  }
  return hits;
}

std::string judge_prompt(const JudgeSnapshot& snapshot, const GuidelineStore& guidelines, const JudgeConfig& cfg,
                         const nlohmann::json& patient_context) {
  std::string p = prompts::render(
      prompts::kJudge, {{"signal_phrase", cfg.signal_phrase}, {"guideline_summaries", guidelines.summaries_text()}});
  p += kToolFormat;
  p += "\n\n";
  p += kSnapshotMarker;
  p += nlohmann::json(snapshot).dump();
  p += "\n\n## Patient context\n";
  p += patient_context.dump();
  p += "\n";
  return p;
}

JudgeOutcome judge_checkpoint(const JudgeSnapshot& snapshot, const GuidelineStore& guidelines,
                              CompletionClient& backend, const JudgeConfig& cfg,
                              const nlohmann::json& patient_context) {
  JudgeDiagnostics diag;
  std::string prompt = judge_prompt(snapshot, guidelines, cfg, patient_context);
  for (int turn = 0; turn < cfg.max_turns; ++turn) {
    std::string reply;
    try {
      reply = backend.complete({prompt, 0.0, 2048});
    } catch (const Error& e) {
      diag.backend_failure = true;
      diag.notes.push_back(std::string(e.kind()) + ": " + e.what());
      return quiet(std::move(diag));
    } catch (const std::exception& e) {
      diag.backend_failure = true;
      diag.notes.push_back(std::string("backend: ") + e.what());
      return quiet(std::move(diag));
    }

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(strip_code_fence(reply));
    } catch (const nlohmann::json::parse_error&) {
      diag.malformed_output = true;
      diag.notes.push_back("judge reply is not JSON");
      return quiet(std::move(diag));
    }
    if (!j.is_object()) {
      diag.malformed_output = true;
      diag.notes.push_back("judge reply is not a JSON object");
      return quiet(std::move(diag));
    }

    if (j.contains("tool")) {
      const nlohmann::json call = {{"tool", j["tool"]}, {"arguments", j.value("arguments", nlohmann::json::object())}};
      nlohmann::json result;
      const auto& args = call["arguments"];
      if (diag.tool_calls >= cfg.max_tool_calls) {
        ++diag.rejected_tool_calls;
        result = {{"error", "tool budget exhausted; respond with the decision JSON"}};
      } else if (call["tool"] != "read_guideline_section" || !args.is_object() ||
                 !args.contains("guideline_id") || !args.contains("section_id") ||
                 !args["guideline_id"].is_string() || !args["section_id"].is_string()) {
        ++diag.rejected_tool_calls;
        result = {{"error", "unknown tool or bad arguments"}};
      } else {
        ++diag.tool_calls;
        const auto* s = guidelines.find(args["guideline_id"].get<std::string>(), args["section_id"].get<std::string>());
        result = s ? nlohmann::json{{"guideline_id", s->guideline_id}, {"section_id", s->section_id},
                                    {"full_text", s->full_text}}
                   : nlohmann::json{{"error", "no such section"}};
      }
      prompt += "\n## Tool call\n" + call.dump() + "\n";
      prompt += std::string(kToolResultMarker) + result.dump() + "\n";
      continue;
    }

    std::string why;
    auto d = parse_decision(j, why);
    if (!d) {
      diag.malformed_output = true;
      diag.notes.push_back(why);
      return quiet(std::move(diag));
    }
    if (!d->intervene) {
      if (!d->reason.empty() || !d->advice.empty() || !d->cited_sections.empty() || d->urgency != Urgency::none) {
        diag.notes.push_back("non-intervention carried fields; cleared");
      }
      return quiet(std::move(diag));
    }
    if (d->urgency == Urgency::none) {
      diag.malformed_output = true;
      diag.notes.push_back("intervention with urgency 'none'");
      return quiet(std::move(diag));
    }
    std::erase_if(d->cited_sections, [&](const GuidelineRef& r) {
      if (guidelines.contains(r)) return false;
      diag.notes.push_back("dropped unknown citation " + r.guideline_id + "/" + r.section_id);
      return true;
    });
    if (auto hits = lint_advice(d->advice); !hits.empty()) {
      diag.notes.push_back("advice failed lint (" + hits.front() + "); replaced");
      d->advice = cfg.safe_advice;
    }
    return {std::move(*d), std::move(diag)};
  }
  diag.malformed_output = true;
  diag.notes.push_back("judge exceeded the turn limit without a decision");
  return quiet(std::move(diag));
}

MockJudgeBackend::MockJudgeBackend(RuleConfig rules, double af_min_duration_s)
    : rules_(rules), af_min_duration_s_(af_min_duration_s) {}

std::string MockJudgeBackend::complete(const CompletionRequest& req) {
  ++calls_;
  const auto pos = req.prompt.find(kSnapshotMarker);
  if (pos == std::string::npos) throw BackendError("mock judge: prompt has no snapshot");
  const auto start = pos + kSnapshotMarker.size();
  const auto end = req.prompt.find('\n', start);
  const JudgeSnapshot s = nlohmann::json::parse(req.prompt.substr(start, end - start)).get<JudgeSnapshot>();

  JudgeDecision d;
  if (s.hr_bpm && *s.hr_bpm < rules_.brady_hr_bpm) {
    d = {true, Urgency::high, "Heart rate of " + fmt0(*s.hr_bpm) + " bpm is below the bradycardia limit.",
         "Please see a clinician promptly, especially if you feel faint.",
         {{"syn-hr-2024", "extreme-bradycardia"}}};
  } else if (s.hr_bpm && *s.hr_bpm > rules_.tachy_hr_bpm) {
    d = {true, Urgency::high, "Heart rate of " + fmt0(*s.hr_bpm) + " bpm is above the tachycardia limit.",
         "Please rest and see a clinician promptly.", {{"syn-hr-2024", "extreme-tachycardia"}}};
  } else if (s.af_episode_duration_s && *s.af_episode_duration_s > af_min_duration_s_) {
    d = {true, Urgency::medium,
         "Irregular rhythm has lasted about " + fmt0(*s.af_episode_duration_s / 60.0) + " minutes.",
         "Consider seeing a clinician soon.", {{"syn-af-2024", "episode-over-5min"}}};
  } else if (s.tachycardia_ratio_5min && *s.tachycardia_ratio_5min >= rules_.sustained_ratio &&
             s.tachycardia_sample_count >= rules_.sustained_min_samples) {
    d = {true, Urgency::medium, "Heart rate has stayed elevated for most of the last five minutes.",
         "Rest for a while and consider seeing a clinician soon if this recurs.",
         {{"syn-hr-2024", "sustained-tachycardia"}}};
  }
  if (d.intervene && req.prompt.find(kToolResultMarker) == std::string::npos) {
    const auto& ref = d.cited_sections.front();
    return nlohmann::json{{"tool", "read_guideline_section"},
                          {"arguments", {{"guideline_id", ref.guideline_id}, {"section_id", ref.section_id}}}}
        .dump();
  }
  return nlohmann::json(d).dump();
}

}  // namespace vital
