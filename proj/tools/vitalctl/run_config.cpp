#include "run_config.hpp"

#include <set>

#include "vital/error.hpp"
#include "vital/jsonl.hpp"

namespace vital::cli {

using nlohmann::json;

namespace {

const std::set<std::string>& known_sections() {
  static const std::set<std::string> keys{"paths",   "screen",  "rules",         "scoring", "qa_generation",
                                          "split",   "backend", "endpoint",      "seed",    "judge",
                                          "memory",  "replan_budget"};
  return keys;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!known_sections().count(k)) throw ConfigError("unknown run config section: " + k);
  }
  RunConfig c;
  if (j.contains("paths")) {
    const auto& p = j["paths"];
    for (const auto& [k, v] : p.items()) {
      if (k != "data_dir" && k != "output_dir" && k != "guidelines") throw ConfigError("unknown paths key: " + k);
    }
    c.data_dir = p.value("data_dir", c.data_dir.string());
    c.output_dir = p.value("output_dir", c.output_dir.string());
    if (p.contains("guidelines") && !p["guidelines"].is_null()) c.guidelines = p["guidelines"].get<std::string>();
  }
  if (j.contains("screen")) c.monitor.screen = j["screen"].get<ScreenConfig>();
  if (j.contains("rules")) c.monitor.rules = j["rules"].get<RuleConfig>();
  if (j.contains("memory")) {
    const auto& m = j["memory"];
    c.monitor.memory.raw_cache_windows = m.value("raw_cache_windows", c.monitor.memory.raw_cache_windows);
    c.monitor.memory.trailing_horizon_s = m.value("trailing_horizon_s", c.monitor.memory.trailing_horizon_s);
  }
  if (j.contains("judge")) c.monitor.judge_enabled = j["judge"].get<bool>();
  if (j.contains("scoring")) c.scoring = j["scoring"].get<ScoringConfig>();
  if (j.contains("qa_generation")) {
    const auto& q = j["qa_generation"];
    c.qa_gen.per_cell = q.value("per_cell", c.qa_gen.per_cell);
    c.qa_gen.tier_b_windows = q.value("tier_b_windows", c.qa_gen.tier_b_windows);
    c.qa_gen.tier_b_stride = q.value("tier_b_stride", c.qa_gen.tier_b_stride);
  }
  if (j.contains("split")) {
    const auto& s = j["split"];
    c.split.dev_frac = s.value("dev_frac", c.split.dev_frac);
    c.split.seed = s.value("seed", c.split.seed);
    const std::string r = s.value("rounding", std::string("floor"));
    if (r != "floor" && r != "ceil") throw ConfigError("split.rounding must be floor or ceil");
    c.split.rounding = r == "ceil" ? DevRounding::ceil : DevRounding::floor;
  }
  c.replan_budget = j.value("replan_budget", c.replan_budget);
  c.seed = j.value("seed", c.seed);
  const std::string backend = j.value("backend", std::string("offline"));
  if (backend != "offline" && backend != "endpoint") throw ConfigError("backend must be offline or endpoint");
  c.backend = backend == "endpoint" ? Backend::endpoint : Backend::offline;
  if (j.contains("endpoint")) {
    const auto& e = j["endpoint"];
    if (e.contains("api_key")) throw ConfigError("endpoint credentials belong in the environment, not the config");
    EndpointConfig ep;
    ep.url = e.value("url", std::string{});
    ep.model = e.value("model", std::string{});
    ep.timeout = std::chrono::milliseconds(e.value("timeout_ms", std::int64_t{30000}));
    c.endpoint = ep;
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) { return from_json(read_json_file(path)); }

void RunConfig::validate() const {
  if (backend == Backend::offline && endpoint) {
    throw ConfigError("offline mode does not accept an endpoint section");
  }
  if (replan_budget < 0) throw ConfigError("replan_budget must be non-negative");
  monitor.screen.validate();
  monitor.rules.validate();
}

json RunConfig::to_json() const {
  json j = {{"paths", {{"data_dir", data_dir.string()}, {"output_dir", output_dir.string()}}},
            {"screen", monitor.screen},
            {"rules", monitor.rules},
            {"judge", monitor.judge_enabled},
            {"scoring", scoring},
            {"qa_generation",
             {{"per_cell", qa_gen.per_cell},
              {"tier_b_windows", qa_gen.tier_b_windows},
              {"tier_b_stride", qa_gen.tier_b_stride}}},
            {"split",
             {{"dev_frac", split.dev_frac},
              {"seed", split.seed},
              {"rounding", split.rounding == DevRounding::ceil ? "ceil" : "floor"}}},
            {"replan_budget", replan_budget},
            {"backend", backend == Backend::offline ? "offline" : "endpoint"},
            {"seed", seed}};
  j["paths"]["guidelines"] = guidelines ? json(guidelines->string()) : json(nullptr);
  if (endpoint) {
    j["endpoint"] = {{"url", endpoint->url}, {"model", endpoint->model}, {"timeout_ms", endpoint->timeout.count()}};
  }
  return j;
}

}  // namespace vital::cli
