#pragma once

#include <map>
#include <string>
#include <string_view>

namespace vital::prompts {

/// Revised-plan request sent after a failed validation. Slots:
/// previous_plan, issues, tool_names, tools_description.
extern const std::string_view kReplan;

/// Proactive alert judge. Slots: signal_phrase, guideline_summaries.
extern const std::string_view kJudge;

/// Initial plan request. Slots: query, locator, tool_names, tools_description.
extern const std::string_view kPlanner;

/// Final answer composition. Slots: query, qtype, options, plan, evidence.
extern const std::string_view kResponder;

/// Substitutes {name} slots and unescapes {{ and }}. Throws ConfigError on
/// a slot missing from `values` or an unbalanced brace.
std::string render(std::string_view tmpl, const std::map<std::string, std::string>& values);

}  // namespace vital::prompts
