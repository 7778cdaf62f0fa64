#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vital {

class WindowStore;
class StateStore;
class PatientMemory;
class KnowledgeClient;
struct MonitorConfig;

enum class ToolCategory {
  signal_analysis,
  dataset_processing,
  record_lookup,
  proactive_context,
  medical_knowledge,
  state_access
};
std::string_view to_string(ToolCategory c);
ToolCategory parse_tool_category(std::string_view s);

enum class OutputKind { data, metadata, state, evidence, explanation };
std::string_view to_string(OutputKind k);
OutputKind parse_output_kind(std::string_view s);

enum class ArgType { string, number, integer, boolean, object, array };
std::string_view to_string(ArgType t);
ArgType parse_arg_type(std::string_view s);

struct ArgSpec {
  std::string name;
  ArgType type = ArgType::string;
  bool required = false;
  std::string description;
  bool operator==(const ArgSpec&) const = default;
};

struct ToolDescriptor {
  std::string name;
  ToolCategory category = ToolCategory::signal_analysis;
  std::string description;
  std::vector<ArgSpec> args;
  OutputKind output_kind = OutputKind::data;
  std::vector<std::string> required_output_fields;
  bool benchmark_only = false;  // hidden from the planner's allow list
  bool operator==(const ToolDescriptor&) const = default;
};

void to_json(nlohmann::json& j, const ToolDescriptor& d);
void from_json(const nlohmann::json& j, ToolDescriptor& d);

enum class ToolStatus { ok, error };

struct ToolResult {
  std::string tool_name;
  ToolStatus status = ToolStatus::ok;
  nlohmann::json payload = nlohmann::json::object();
  std::string error_code;  // unknown_tool | invalid_args | tool_failure
  std::string message;
  std::vector<std::string> missing_fields;  // set when the handler dropped required fields
  double elapsed_ms = 0.0;

  bool ok() const { return status == ToolStatus::ok; }
};

/// Deterministic digest (no timing) used in answers and logs.
nlohmann::json digest(const ToolResult& r);

/// Everything a handler may touch. Pointers may be null when a resource is
/// not configured; handlers then fail with a tool_failure.
struct ToolContext {
  const WindowStore* windows = nullptr;
  const StateStore* states = nullptr;  // leakage-filtered view
  const std::map<std::string, PatientMemory>* memories = nullptr;
  KnowledgeClient* knowledge = nullptr;
  const MonitorConfig* monitor = nullptr;
  StateStore* scratch_states = nullptr;  // written by state-construction tools
};

using ToolHandler = std::function<nlohmann::json(const nlohmann::json& args, const ToolContext& ctx)>;

/// Thrown by register_tool on a duplicate or invalid descriptor.
class RegistrationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ToolRegistry {
 public:
  void register_tool(ToolDescriptor d, ToolHandler h);

  bool has(std::string_view name) const;
  const ToolDescriptor* descriptor(std::string_view name) const;
  /// Name-sorted; optionally one category.
  std::vector<ToolDescriptor> list_tools(std::optional<ToolCategory> category = std::nullopt) const;
  /// Names the planner may use: every tool not flagged benchmark_only.
  std::vector<std::string> allowed_tool_names() const;
  std::size_t size() const { return tools_.size(); }

  /// {"tools": [descriptor...]} in name order.
  nlohmann::json schema_export() const;
  static std::vector<ToolDescriptor> descriptors_from_schema(const nlohmann::json& schema);
  /// Human-readable block for planner prompts.
  std::string tools_description(bool allowed_only = true) const;

  /// Validates args, runs the handler and checks required output fields.
  /// Never throws: every failure becomes an error result.
  ToolResult invoke(std::string_view name, const nlohmann::json& args, const ToolContext& ctx) const;

 private:
  struct Entry {
    ToolDescriptor descriptor;
    ToolHandler handler;
  };
  std::map<std::string, Entry, std::less<>> tools_;
};

/// Problems with `args` against `d`; empty when valid.
std::vector<std::string> validate_args(const ToolDescriptor& d, const nlohmann::json& args);

/// The 41 built-in tools.
ToolRegistry make_builtin_registry();
void register_builtin_tools(ToolRegistry& reg);

}  // namespace vital
