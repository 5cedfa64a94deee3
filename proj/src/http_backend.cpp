#ifdef NEGSIM_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif

#include "negsim/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "negsim/errors.hpp"

namespace negsim {

namespace {

struct ParsedUrl {
  bool https = false;
  std::string host;
  int port = 0;
};

ParsedUrl parse_base_url(const std::string& url) {
  ParsedUrl parsed;
  std::string rest;
  if (url.rfind("https://", 0) == 0) {
    parsed.https = true;
    rest = url.substr(8);
  } else if (url.rfind("http://", 0) == 0) {
    rest = url.substr(7);
  } else {
    throw ConfigError("backend base_url must start with http:// or https://");
  }
  while (!rest.empty() && rest.back() == '/') rest.pop_back();
  const auto colon = rest.find(':');
  if (colon == std::string::npos) {
    parsed.host = rest;
    parsed.port = parsed.https ? 443 : 80;
  } else {
    parsed.host = rest.substr(0, colon);
    parsed.port = std::atoi(rest.c_str() + colon + 1);
  }
  if (parsed.host.empty() || parsed.port <= 0) {
    throw ConfigError("cannot parse backend base_url: " + url);
  }
  return parsed;
}

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

struct HttpChatBackend::Impl {
  ParsedUrl url;
  std::string api_key;
  std::mutex rate_mutex;
  std::chrono::steady_clock::time_point last_request{};

  std::string post_json(const LiveBackendConfig& config,
                        const std::string& body) {
    if (config.min_request_interval_ms > 0) {
      std::unique_lock lock(rate_mutex);
      const auto interval =
          std::chrono::milliseconds(config.min_request_interval_ms);
      const auto now = std::chrono::steady_clock::now();
      if (last_request.time_since_epoch().count() != 0 &&
          now - last_request < interval) {
        std::this_thread::sleep_for(interval - (now - last_request));
      }
      last_request = std::chrono::steady_clock::now();
    }

    httplib::Headers headers = {
        {"Authorization", "Bearer " + api_key},
    };
    auto do_post = [&](auto& client) -> httplib::Result {
      client.set_connection_timeout(config.timeout_seconds);
      client.set_read_timeout(config.timeout_seconds);
      client.set_write_timeout(config.timeout_seconds);
      return client.Post(config.path, headers, body, "application/json");
    };
    if (url.https) {
#ifdef NEGSIM_WITH_OPENSSL
      httplib::SSLClient client(url.host, url.port);
      auto res = do_post(client);
      return handle(config, res);
#else
      throw BackendUnavailable("built without TLS support; use http://");
#endif
    }
    httplib::Client client(url.host, url.port);
    auto res = do_post(client);
    return handle(config, res);
  }

  std::string handle(const LiveBackendConfig&, const httplib::Result& res) {
    if (!res) {
      throw BackendUnavailable("transport error: " +
                               httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      const std::string detail =
          "HTTP " + std::to_string(res->status) + ": " + res->body;
      if (retryable_status(res->status)) throw BackendUnavailable(detail);
      throw BackendRefusal(detail);
    }
    return res->body;
  }
};

HttpChatBackend::HttpChatBackend(LiveBackendConfig config)
    : config_(std::move(config)), impl_(std::make_unique<Impl>()) {
  impl_->url = parse_base_url(config_.base_url);
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigError("environment variable " + config_.api_key_env +
                      " is not set");
  }
  impl_->api_key = key;
}

HttpChatBackend::~HttpChatBackend() = default;

std::string HttpChatBackend::generate(const std::string& system_prompt,
                                      std::span<const Utterance> history,
                                      Role self) {
  nlohmann::json messages = nlohmann::json::array();
  if (history.empty()) {
    messages.push_back({{"role", "user"}, {"content", system_prompt}});
  } else {
    messages.push_back({{"role", "system"}, {"content", system_prompt}});
    for (const Utterance& u : history) {
      messages.push_back(
          {{"role", u.speaker == self ? "assistant" : "user"},
           {"content", u.text}});
    }
  }
  nlohmann::json request = {{"model", config_.model},
                            {"messages", std::move(messages)}};
  if (config_.temperature) request["temperature"] = *config_.temperature;
  if (config_.max_tokens) request["max_tokens"] = *config_.max_tokens;
  const std::string body = request.dump();

  std::string last_error;
  const int attempts = std::max(1, config_.max_retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(500LL << (attempt - 1)));
    }
    try {
      const std::string response = impl_->post_json(config_, body);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(response);
      } catch (const nlohmann::json::exception& e) {
        throw BackendRefusal(std::string("malformed response: ") + e.what());
      }
      if (!doc.contains("choices") || !doc["choices"].is_array() ||
          doc["choices"].empty()) {
        throw BackendRefusal("response has no choices: " + response);
      }
      const auto& message = doc["choices"][0]["message"];
      if (!message.contains("content") || !message["content"].is_string()) {
        throw BackendRefusal("choice carries no text content");
      }
      const std::string content = message["content"].get<std::string>();
      if (content.empty()) throw BackendRefusal("empty completion");
      return content;
    } catch (const BackendUnavailable& e) {
      last_error = e.what();  // transient; retry with backoff
    }
  }
  throw BackendUnavailable("giving up after " + std::to_string(attempts) +
                           " attempts: " + last_error);
}

}  // namespace negsim
