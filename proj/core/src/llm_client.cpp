#include "vital/llm_client.hpp"

#include <cstdlib>
#include <regex>

#include "httplib.h"
#include "vital/error.hpp"

namespace vital {

namespace {

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw ConfigError("endpoint url must be http(s)://host[:port]/path: " + url);
  return {m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
}

}  // namespace

std::optional<EndpointConfig> EndpointConfig::from_env() {
  EndpointConfig c;
  c.url = env_or_empty("VITAL_LLM_ENDPOINT");
  if (c.url.empty()) return std::nullopt;
  c.api_key = env_or_empty("VITAL_LLM_API_KEY");
  c.model = env_or_empty("VITAL_LLM_MODEL");
  return c;
}

HttpCompletionClient::HttpCompletionClient(EndpointConfig cfg) : cfg_(std::move(cfg)) {
  split_url(cfg_.url);
  if (cfg_.timeout.count() <= 0) throw ConfigError("endpoint timeout must be > 0");
}

std::string HttpCompletionClient::complete(const CompletionRequest& req) {
  const SplitUrl u = split_url(cfg_.url);
  httplib::Client cli(u.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg_.timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());

  nlohmann::json body = {{"prompt", req.prompt}, {"temperature", req.temperature}, {"max_tokens", req.max_tokens}};
  if (!cfg_.model.empty()) body["model"] = cfg_.model;
  httplib::Headers headers;
  if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);

  auto res = cli.Post(u.path, headers, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::Read || err == httplib::Error::Write || err == httplib::Error::ConnectionTimeout) {
      throw BackendTimeout("completion endpoint timed out: " + httplib::to_string(err));
    }
    throw BackendError("completion endpoint unreachable: " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    throw BackendError("completion endpoint returned HTTP " + std::to_string(res->status));
  }
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error&) {
    throw BackendError("completion endpoint returned non-JSON body");
  }
  auto text = extract_completion_text(reply);
  if (!text) throw BackendError("completion reply has no text field");
  return *text;
}

std::optional<std::string> extract_completion_text(const nlohmann::json& reply) {
  if (!reply.is_object()) return std::nullopt;
  if (auto it = reply.find("choices"); it != reply.end() && it->is_array() && !it->empty()) {
    const auto& c = (*it)[0];
    if (c.contains("text") && c["text"].is_string()) return c["text"].get<std::string>();
    if (c.contains("message") && c["message"].is_object() && c["message"].contains("content") &&
        c["message"]["content"].is_string()) {
      return c["message"]["content"].get<std::string>();
    }
  }
  for (const char* key : {"text", "completion"}) {
    if (reply.contains(key) && reply[key].is_string()) return reply[key].get<std::string>();
  }
  return std::nullopt;
}

std::string strip_code_fence(std::string_view text) {
  auto trim = [](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return std::string_view{};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  };
  std::string_view t = trim(text);
  if (t.starts_with("```")) {
    const auto nl = t.find('\n');
    t = nl == std::string_view::npos ? std::string_view{} : t.substr(nl + 1);
    if (const auto close = t.rfind("```"); close != std::string_view::npos) t = t.substr(0, close);
    t = trim(t);
  }
  return std::string(t);
}

}  // namespace vital
