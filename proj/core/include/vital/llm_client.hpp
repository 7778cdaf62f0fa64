#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"

namespace vital {

struct CompletionRequest {
  std::string prompt;
  double temperature = 0.0;
  int max_tokens = 2048;
};

/// Text-in, text-out model endpoint. Implementations throw BackendTimeout
/// or BackendError; callers decide how to degrade.
class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual std::string complete(const CompletionRequest& req) = 0;
};

struct EndpointConfig {
  std::string url;  // full URL of the completion route
  std::string api_key;
  std::string model;
  std::chrono::milliseconds timeout{30000};

  /// VITAL_LLM_ENDPOINT, VITAL_LLM_API_KEY, VITAL_LLM_MODEL. Absent when
  /// the endpoint variable is unset or empty.
  static std::optional<EndpointConfig> from_env();
};

/// POSTs {model, prompt, temperature, max_tokens} as JSON with a bearer
/// token and reads the first completion from the reply.
class HttpCompletionClient : public CompletionClient {
 public:
  explicit HttpCompletionClient(EndpointConfig cfg);
  std::string complete(const CompletionRequest& req) override;

 private:
  EndpointConfig cfg_;
};

/// Pulls the completion text out of the common reply shapes:
/// choices[0].text, choices[0].message.content, text, completion.
std::optional<std::string> extract_completion_text(const nlohmann::json& reply);

/// Strips a surrounding markdown code fence, if any, and whitespace.
std::string strip_code_fence(std::string_view text);

}  // namespace vital
