#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vital/agent.hpp"
#include "vital/llm_client.hpp"

namespace vital {

/// <60 bradycardia, 60-100 normal, >100 tachycardia.
std::string hr_category(double hr_bpm);

/// {0: not at all, (0, 0.25]: occasionally, (0.25, 0.6]: often, else most of the time}.
std::string af_burden_bucket(double burden);

/// Rise of more than this between the first and last window counts as an increase.
inline constexpr double kHrIncreaseBpm = 5.0;
inline constexpr double kTachycardiaBpm = 100.0;

/// First option whose normalized text equals or contains `label`.
std::optional<std::string> match_option(std::string_view label, std::span<const std::string> options);

std::string format_bpm(double v);  // "72 bpm"
std::string format_ms(double v);   // "41.3 ms"

/// Reads the target field straight from the evidence payloads.
class DeterministicResponder : public Responder {
 public:
  Answer compose(const Query& q, const Plan& plan, std::span<const std::optional<ToolResult>> results) override;
};

/// Sends query, plan and evidence digests to the endpoint and returns the
/// trimmed reply. Backend errors fall back to the deterministic responder.
class LlmResponder : public Responder {
 public:
  explicit LlmResponder(CompletionClient& client) : client_(client) {}
  Answer compose(const Query& q, const Plan& plan, std::span<const std::optional<ToolResult>> results) override;
  std::string prompt(const Query& q, const Plan& plan, const nlohmann::json& evidence) const;

 private:
  CompletionClient& client_;
  DeterministicResponder fallback_;
};

}  // namespace vital
