// Chat-completion backend over HTTP. The system message is the rendered
// role prompt; dialogue turns map to assistant/user from the agent's
// perspective. Credentials come from an environment variable; transient
// failures retry with exponential backoff.
#pragma once

#include <memory>
#include <optional>
#include <string>

#include "negsim/agents.hpp"

namespace negsim {

struct LiveBackendConfig {
  std::string base_url;  // e.g. "https://api.openai.com"
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";
  std::optional<double> temperature;
  std::optional<int> max_tokens;
  int max_retries = 3;
  int timeout_seconds = 60;
  int min_request_interval_ms = 0;  // request-rate ceiling
};

class HttpChatBackend : public GenerationBackend {
 public:
  explicit HttpChatBackend(LiveBackendConfig config);
  ~HttpChatBackend() override;

  // With an empty history the prompt is sent as a single user message
  // (single-shot extraction); otherwise as the system message followed by
  // the mapped turns.
  std::string generate(const std::string& system_prompt,
                       std::span<const Utterance> history, Role self) override;

  const LiveBackendConfig& config() const { return config_; }

 private:
  struct Impl;
  LiveBackendConfig config_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace negsim
