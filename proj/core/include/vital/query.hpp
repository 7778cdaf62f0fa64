#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vital/types.hpp"

namespace vital {

enum class Tier { A, B };
std::string_view to_string(Tier t);
Tier parse_tier(std::string_view s);

enum class QType { single_verify, single_choose, single_query };
std::string_view to_string(QType q);
QType parse_qtype(std::string_view s);

/// Anchors a question to one patient interval.
struct WindowLocator {
  Dataset dataset = Dataset::synthetic;
  std::string patient_id;
  double window_start_s = 0.0;
  double window_end_s = 0.0;
  bool operator==(const WindowLocator&) const = default;
};

void to_json(nlohmann::json& j, const WindowLocator& l);
void from_json(const nlohmann::json& j, WindowLocator& l);

/// Benchmark target fields the deterministic planner and responder know.
namespace targets {
inline constexpr std::string_view hr_current = "hr_current";
inline constexpr std::string_view sdnn_current = "sdnn_current";
inline constexpr std::string_view tachycardia_current = "tachycardia_current";
inline constexpr std::string_view hr_category_current = "hr_category_current";
inline constexpr std::string_view af_presence_current = "af_presence_current";
inline constexpr std::string_view af_burden = "af_burden";
inline constexpr std::string_view af_any = "af_any";
inline constexpr std::string_view max_hr = "max_hr";
inline constexpr std::string_view mean_hr = "mean_hr";
inline constexpr std::string_view hr_increase = "hr_increase";
}  // namespace targets

/// Every known target, in routing-table order.
const std::vector<std::string>& known_targets();

/// Keyword fallback when a question carries no target metadata.
std::optional<std::string> infer_target(std::string_view question);

struct Query {
  std::string text;
  std::optional<WindowLocator> locator;
  std::optional<Tier> tier;
  std::optional<QType> qtype;
  std::vector<std::string> options;
  std::optional<std::string> target;

  /// Throws ConfigError when a choose question has no options.
  void validate() const;
};

void to_json(nlohmann::json& j, const Query& q);
void from_json(const nlohmann::json& j, Query& q);

}  // namespace vital
