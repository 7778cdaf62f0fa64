#include "vital/tool_registry.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#include "vital/error.hpp"

namespace vital {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<E, N>& all, const char* what) {
  for (E e : all) {
    if (to_string(e) == s) return e;
  }
  throw ParseError(std::string("unknown ") + what + ": " + std::string(s));
}

bool type_matches(ArgType t, const nlohmann::json& v) {
  switch (t) {
    case ArgType::string: return v.is_string();
    case ArgType::number: return v.is_number();
    case ArgType::integer: return v.is_number_integer() || (v.is_number_float() && v.get<double>() == std::floor(v.get<double>()));
    case ArgType::boolean: return v.is_boolean();
    case ArgType::object: return v.is_object();
    case ArgType::array: return v.is_array();
  }
  return false;
}

ToolResult error_result(std::string_view name, std::string code, std::string message) {
  ToolResult r;
  r.tool_name = std::string(name);
  r.status = ToolStatus::error;
  r.payload = nlohmann::json::object();
  r.error_code = std::move(code);
  r.message = std::move(message);
  return r;
}

}  // namespace

std::string_view to_string(ToolCategory c) {
  switch (c) {
    case ToolCategory::signal_analysis: return "signal_analysis";
    case ToolCategory::dataset_processing: return "dataset_processing";
    case ToolCategory::record_lookup: return "record_lookup";
    case ToolCategory::proactive_context: return "proactive_context";
    case ToolCategory::medical_knowledge: return "medical_knowledge";
    case ToolCategory::state_access: return "state_access";
  }
  return "signal_analysis";
}

ToolCategory parse_tool_category(std::string_view s) {
  constexpr std::array all{ToolCategory::signal_analysis,   ToolCategory::dataset_processing,
                           ToolCategory::record_lookup,     ToolCategory::proactive_context,
                           ToolCategory::medical_knowledge, ToolCategory::state_access};
  return parse_enum(s, all, "tool category");
}

std::string_view to_string(OutputKind k) {
  switch (k) {
    case OutputKind::data: return "data";
    case OutputKind::metadata: return "metadata";
    case OutputKind::state: return "state";
    case OutputKind::evidence: return "evidence";
    case OutputKind::explanation: return "explanation";
  }
  return "data";
}

OutputKind parse_output_kind(std::string_view s) {
  constexpr std::array all{OutputKind::data, OutputKind::metadata, OutputKind::state, OutputKind::evidence,
                           OutputKind::explanation};
  return parse_enum(s, all, "output kind");
}

std::string_view to_string(ArgType t) {
  switch (t) {
    case ArgType::string: return "string";
    case ArgType::number: return "number";
    case ArgType::integer: return "integer";
    case ArgType::boolean: return "boolean";
    case ArgType::object: return "object";
    case ArgType::array: return "array";
  }
  return "string";
}

ArgType parse_arg_type(std::string_view s) {
  constexpr std::array all{ArgType::string,  ArgType::number, ArgType::integer,
                           ArgType::boolean, ArgType::object, ArgType::array};
  return parse_enum(s, all, "argument type");
}

void to_json(nlohmann::json& j, const ToolDescriptor& d) {
  nlohmann::json args = nlohmann::json::array();
  for (const auto& a : d.args) {
    args.push_back({{"name", a.name}, {"type", to_string(a.type)}, {"required", a.required},
                    {"description", a.description}});
  }
  j = {{"name", d.name},
       {"category", to_string(d.category)},
       {"description", d.description},
       {"args", args},
       {"output_kind", to_string(d.output_kind)},
       {"required_output_fields", d.required_output_fields},
       {"benchmark_only", d.benchmark_only}};
}

void from_json(const nlohmann::json& j, ToolDescriptor& d) {
  ToolDescriptor out;
  out.name = j.at("name").get<std::string>();
  out.category = parse_tool_category(j.at("category").get<std::string>());
  out.description = j.value("description", std::string());
  for (const auto& a : j.value("args", nlohmann::json::array())) {
    out.args.push_back({a.at("name").get<std::string>(), parse_arg_type(a.at("type").get<std::string>()),
                        a.value("required", false), a.value("description", std::string())});
  }
  out.output_kind = parse_output_kind(j.at("output_kind").get<std::string>());
  out.required_output_fields = j.at("required_output_fields").get<std::vector<std::string>>();
  out.benchmark_only = j.value("benchmark_only", false);
  d = std::move(out);
}

nlohmann::json digest(const ToolResult& r) {
  nlohmann::json j = {{"tool", r.tool_name}, {"status", r.ok() ? "ok" : "error"}};
  if (r.ok()) {
    j["payload"] = r.payload;
  } else {
    j["error_code"] = r.error_code;
    j["message"] = r.message;
    if (!r.missing_fields.empty()) j["missing_fields"] = r.missing_fields;
  }
  return j;
}

std::vector<std::string> validate_args(const ToolDescriptor& d, const nlohmann::json& args) {
  std::vector<std::string> problems;
  if (!args.is_object()) {
    problems.push_back("arguments must be an object");
    return problems;
  }
  for (const auto& spec : d.args) {
    auto it = args.find(spec.name);
    if (it == args.end() || it->is_null()) {
      if (spec.required) problems.push_back("missing required argument '" + spec.name + "'");
      continue;
    }
    if (!type_matches(spec.type, *it)) {
      problems.push_back("argument '" + spec.name + "' must be " + std::string(to_string(spec.type)));
    }
  }
  for (const auto& [k, v] : args.items()) {
    const bool known = std::any_of(d.args.begin(), d.args.end(), [&](const ArgSpec& s) { return s.name == k; });
    if (!known) problems.push_back("unexpected argument '" + k + "'");
  }
  return problems;
}

void ToolRegistry::register_tool(ToolDescriptor d, ToolHandler h) {
  if (d.name.empty()) throw RegistrationError("tool name must not be empty");
  if (tools_.count(d.name)) throw RegistrationError("duplicate tool name: " + d.name);
  if (d.required_output_fields.empty()) throw RegistrationError("tool " + d.name + " declares no output fields");
  if (!h) throw RegistrationError("tool " + d.name + " has no handler");
  std::string name = d.name;
  tools_.emplace(std::move(name), Entry{std::move(d), std::move(h)});
}

bool ToolRegistry::has(std::string_view name) const { return tools_.find(name) != tools_.end(); }

const ToolDescriptor* ToolRegistry::descriptor(std::string_view name) const {
  auto it = tools_.find(name);
  return it == tools_.end() ? nullptr : &it->second.descriptor;
}

std::vector<ToolDescriptor> ToolRegistry::list_tools(std::optional<ToolCategory> category) const {
  std::vector<ToolDescriptor> out;
  for (const auto& [name, e] : tools_) {
    if (!category || e.descriptor.category == *category) out.push_back(e.descriptor);
  }
  return out;
}

std::vector<std::string> ToolRegistry::allowed_tool_names() const {
  std::vector<std::string> out;
  for (const auto& [name, e] : tools_) {
    if (!e.descriptor.benchmark_only) out.push_back(name);
  }
  return out;
}

nlohmann::json ToolRegistry::schema_export() const {
  nlohmann::json tools = nlohmann::json::array();
  for (const auto& [name, e] : tools_) tools.push_back(e.descriptor);
  return {{"tools", tools}};
}

std::vector<ToolDescriptor> ToolRegistry::descriptors_from_schema(const nlohmann::json& schema) {
  try {
    return schema.at("tools").get<std::vector<ToolDescriptor>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("tool schema: ") + e.what());
  }
}

std::string ToolRegistry::tools_description(bool allowed_only) const {
  std::string out = "## Tool descriptions\n";
  for (const auto& [name, e] : tools_) {
    const auto& d = e.descriptor;
    if (allowed_only && d.benchmark_only) continue;
    out += "- " + d.name + "(";
    for (std::size_t i = 0; i < d.args.size(); ++i) {
      if (i) out += ", ";
      out += d.args[i].name + ": " + std::string(to_string(d.args[i].type)) + (d.args[i].required ? "" : "?");
    }
    out += "): " + d.description + "\n";
  }
  return out;
}

ToolResult ToolRegistry::invoke(std::string_view name, const nlohmann::json& args, const ToolContext& ctx) const {
  const auto t0 = std::chrono::steady_clock::now();
  auto finish = [&](ToolResult r) {
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
  };
  auto it = tools_.find(name);
  if (it == tools_.end()) return finish(error_result(name, "unknown_tool", "no tool named '" + std::string(name) + "'"));
  const Entry& e = it->second;
  if (auto problems = validate_args(e.descriptor, args); !problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    return finish(error_result(name, "invalid_args", msg));
  }
  nlohmann::json payload;
  try {
    payload = e.handler(args, ctx);
  } catch (const std::exception& ex) {
    return finish(error_result(name, "tool_failure", ex.what()));
  } catch (...) {
    return finish(error_result(name, "tool_failure", "handler raised a non-standard exception"));
  }
  if (!payload.is_object()) return finish(error_result(name, "tool_failure", "handler returned a non-object payload"));
  std::vector<std::string> missing;
  for (const auto& f : e.descriptor.required_output_fields) {
    if (!payload.contains(f)) missing.push_back(f);
  }
  if (!missing.empty()) {
    std::string msg = "missing required output field(s):";
    for (const auto& f : missing) msg += " " + f;
    ToolResult r = error_result(name, "tool_failure", msg);
    r.missing_fields = std::move(missing);
    return finish(std::move(r));
  }
  ToolResult r;
  r.tool_name = std::string(name);
  r.payload = std::move(payload);
  return finish(std::move(r));
}

ToolRegistry make_builtin_registry() {
  ToolRegistry reg;
  register_builtin_tools(reg);
  return reg;
}

}  // namespace vital
