#include "vital/responder.hpp"

#include <cstdio>

#include "vital/error.hpp"
#include "vital/prompts.hpp"

namespace vital {

using nlohmann::json;

std::string hr_category(double hr_bpm) {
  if (hr_bpm < 60.0) return "bradycardia";
  if (hr_bpm > kTachycardiaBpm) return "tachycardia";
  return "normal";
}

std::string af_burden_bucket(double burden) {
  if (burden <= 0.0) return "not at all";
  if (burden <= 0.25) return "occasionally";
  if (burden <= 0.6) return "often";
  return "most of the time";
}

std::optional<std::string> match_option(std::string_view label, std::span<const std::string> options) {
  const std::string want = normalize_text(label);
  for (const auto& o : options) {
    if (normalize_text(o) == want) return o;
  }
  for (const auto& o : options) {
    if (normalize_text(o).find(want) != std::string::npos) return o;
  }
  return std::nullopt;
}

std::string format_bpm(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f bpm", v);
  return buf;
}

std::string format_ms(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f ms", v);
  return buf;
}

namespace {

struct Evidence {
  std::vector<const ToolResult*> ok;
  json digests = json::array();

  /// Latest payload value under any of `keys`, with the result it came from.
  std::optional<std::pair<json, const ToolResult*>> find(std::initializer_list<const char*> keys) const {
    for (auto it = ok.rbegin(); it != ok.rend(); ++it) {
      for (const char* k : keys) {
        const auto& p = (*it)->payload;
        if (p.contains(k) && !p[k].is_null()) return std::make_pair(p[k], *it);
      }
    }
    return std::nullopt;
  }
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string choose(const Query& q, const std::string& label) {
  if (q.options.empty()) return label;
  return match_option(label, q.options).value_or(label);
}

}  // namespace

Answer DeterministicResponder::compose(const Query& q, const Plan&, std::span<const std::optional<ToolResult>> results) {
  Evidence ev;
  for (const auto& r : results) {
    if (r && r->ok()) ev.ok.push_back(&*r);
  }
  Answer a;
  a.text = "unknown";
  const std::string target = q.target ? *q.target : infer_target(q.text).value_or("");
  auto used = [&](const ToolResult* r) { a.evidence.push_back(digest(*r)); };
  auto number = [&](std::initializer_list<const char*> keys) -> std::optional<double> {
    auto hit = ev.find(keys);
    if (!hit || !hit->first.is_number()) return std::nullopt;
    used(hit->second);
    return hit->first.get<double>();
  };
  auto flag = [&](std::initializer_list<const char*> keys) -> std::optional<bool> {
    auto hit = ev.find(keys);
    if (!hit || !hit->first.is_boolean()) return std::nullopt;
    used(hit->second);
    return hit->first.get<bool>();
  };

  if (target == targets::hr_current) {
    if (auto v = number({"hr_bpm", "pulse_rate_bpm"})) a.text = format_bpm(*v);
  } else if (target == targets::sdnn_current) {
    if (auto v = number({"sdnn_ms"})) a.text = format_ms(*v);
  } else if (target == targets::tachycardia_current) {
    if (auto v = number({"hr_bpm", "pulse_rate_bpm"})) a.text = yes_no(*v > kTachycardiaBpm);
  } else if (target == targets::hr_category_current) {
    if (auto v = number({"hr_bpm", "pulse_rate_bpm"})) a.text = choose(q, hr_category(*v));
  } else if (target == targets::af_presence_current || target == targets::af_any) {
    if (auto v = flag({"af_detected"})) a.text = yes_no(*v);
  } else if (target == targets::af_burden) {
    if (auto v = number({"af_burden"})) a.text = choose(q, af_burden_bucket(*v));
  } else if (target == targets::max_hr) {
    if (auto v = number({"max_hr_bpm"})) a.text = format_bpm(*v);
  } else if (target == targets::mean_hr) {
    if (auto v = number({"mean_hr_bpm"})) a.text = format_bpm(*v);
  } else if (target == targets::hr_increase) {
    auto hit = ev.find({"first_hr_bpm"});
    if (hit && hit->first.is_number() && hit->second->payload.value("last_hr_bpm", json()).is_number()) {
      const double first = hit->first.get<double>();
      const double last = hit->second->payload["last_hr_bpm"].get<double>();
      used(hit->second);
      a.text = yes_no(last - first > kHrIncreaseBpm);
    }
  } else {
    a.diagnostics.push_back("no target recognized");
  }
  if (a.text == "unknown") a.evidence = json::array();
  return a;
}

std::string LlmResponder::prompt(const Query& q, const Plan& plan, const json& evidence) const {
  std::string options = "none";
  if (!q.options.empty()) {
    options.clear();
    for (const auto& o : q.options) options += "- " + o + "\n";
  }
  return prompts::render(prompts::kResponder,
                         {{"query", q.text},
                          {"qtype", q.qtype ? std::string(to_string(*q.qtype)) : "unspecified"},
                          {"options", options},
                          {"plan", json(plan).dump(2)},
                          {"evidence", evidence.dump(2)}});
}

Answer LlmResponder::compose(const Query& q, const Plan& plan, std::span<const std::optional<ToolResult>> results) {
  json evidence = json::array();
  for (const auto& r : results) {
    if (r && r->ok()) evidence.push_back(digest(*r));
  }
  if (evidence.empty()) return {"unknown", json::array(), {"no usable evidence"}};
  try {
    std::string text = strip_code_fence(client_.complete({prompt(q, plan, evidence)}));
    if (text.empty()) throw BackendError("empty responder reply");
    return {text, evidence, {}};
  } catch (const std::exception& e) {
    Answer a = fallback_.compose(q, plan, results);
    a.diagnostics.push_back(std::string("responder backend failed: ") + e.what());
    return a;
  }
}

}  // namespace vital
