#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "vital/llm_client.hpp"
#include "vital/monitor.hpp"
#include "vital/qa.hpp"
#include "vital/qa_generation.hpp"
#include "vital/split.hpp"

namespace vital::cli {

enum class Backend { offline, endpoint };

/// Everything a run needs besides its input files. Loaded from one JSON
/// file; flags override individual fields afterwards.
struct RunConfig {
  std::filesystem::path data_dir = ".";
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> guidelines;  // built-in corpus when absent
  MonitorConfig monitor;
  ScoringConfig scoring;
  QAGenConfig qa_gen;
  SplitConfig split;
  int replan_budget = 1;
  Backend backend = Backend::offline;
  std::optional<EndpointConfig> endpoint;  // url/model/timeout only; credentials come from the environment
  std::uint64_t seed = 0;

  /// Throws ConfigError on unknown sections or an offline config carrying
  /// endpoint fields.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  void validate() const;
};

}  // namespace vital::cli
