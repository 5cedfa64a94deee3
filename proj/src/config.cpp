#include "negsim/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "negsim/errors.hpp"

namespace negsim {

namespace {

using nlohmann::json;

LiveBackendConfig live_from_json(const json& j) {
  LiveBackendConfig live;
  live.base_url = j.value("base_url", std::string());
  live.path = j.value("path", std::string("/v1/chat/completions"));
  live.model = j.value("model", std::string());
  live.api_key_env = j.value("api_key_env", std::string("OPENAI_API_KEY"));
  if (j.contains("temperature")) live.temperature = j["temperature"].get<double>();
  if (j.contains("max_tokens")) live.max_tokens = j["max_tokens"].get<int>();
  live.max_retries = j.value("max_retries", 3);
  live.timeout_seconds = j.value("timeout_seconds", 60);
  live.min_request_interval_ms = j.value("min_request_interval_ms", 0);
  return live;
}

json live_to_json(const LiveBackendConfig& live) {
  json j;
  j["base_url"] = live.base_url;
  j["path"] = live.path;
  j["model"] = live.model;
  j["api_key_env"] = live.api_key_env;
  if (live.temperature) j["temperature"] = *live.temperature;
  if (live.max_tokens) j["max_tokens"] = *live.max_tokens;
  j["max_retries"] = live.max_retries;
  j["timeout_seconds"] = live.timeout_seconds;
  j["min_request_interval_ms"] = live.min_request_interval_ms;
  return j;
}

BackendSpec backend_from_json(const json& j, const char* what) {
  BackendSpec spec;
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected object");
  spec.type = j.value("type", std::string("scripted"));
  if (spec.type != "scripted" && spec.type != "live" && spec.type != "canned") {
    throw ConfigError(std::string(what) + ": unknown backend type '" +
                      spec.type + "'");
  }
  spec.concession = j.value("concession", 1.0);
  spec.path_rounds = j.value("path_rounds", std::size_t{10});
  spec.dealbreak_prob = j.value("dealbreak_prob", 0.0);
  spec.ponder_prob = j.value("ponder_prob", 0.0);
  spec.strategy_tag = j.value("strategy_tag", std::string());
  spec.concession_from_trait = j.value("concession_from_trait", std::string());
  if (j.contains("concession_range")) {
    const auto& r = j["concession_range"];
    if (!r.is_array() || r.size() != 2) {
      throw ConfigError(std::string(what) + ": concession_range must be [min, max]");
    }
    spec.concession_min = r[0].get<double>();
    spec.concession_max = r[1].get<double>();
  }
  if (j.contains("replies")) {
    spec.replies = j["replies"].get<std::vector<std::string>>();
  }
  if (spec.type == "live") spec.live = live_from_json(j);
  if (!spec.concession_from_trait.empty() &&
      !dimension_from_string(spec.concession_from_trait)) {
    throw ConfigError(std::string(what) + ": unknown trait '" +
                      spec.concession_from_trait + "'");
  }
  return spec;
}

json backend_to_json(const BackendSpec& spec) {
  json j;
  j["type"] = spec.type;
  if (spec.type == "scripted") {
    j["concession"] = spec.concession;
    j["path_rounds"] = spec.path_rounds;
    j["dealbreak_prob"] = spec.dealbreak_prob;
    j["ponder_prob"] = spec.ponder_prob;
    j["strategy_tag"] = spec.strategy_tag;
    j["concession_from_trait"] = spec.concession_from_trait;
    j["concession_range"] = {spec.concession_min, spec.concession_max};
  } else if (spec.type == "canned") {
    j["replies"] = spec.replies;
  } else {
    j["live"] = live_to_json(spec.live);
  }
  return j;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(path + ": expected a JSON object");

  RunConfig config;
  config.seed = doc.value("seed", std::uint64_t{0});
  config.scenario_file = doc.value("scenario_file", std::string());
  config.dialogues = doc.value("dialogues", std::size_t{0});
  config.adjectives_per_dimension =
      doc.value("adjectives_per_dimension", std::size_t{3});
  config.t_max = doc.value("t_max", std::size_t{20});
  config.zone_fraction = doc.value("zone_fraction", 0.7);
  config.adjective_file =
      doc.value("adjective_file", std::string("data/adjectives.tsv"));
  config.strategy_map_file =
      doc.value("strategy_map_file", std::string("data/strategy_map.tsv"));
  config.ipip_items_file =
      doc.value("ipip_items_file", std::string("data/ipip50.tsv"));
  if (doc.contains("buyer_backend")) {
    config.buyer_backend = backend_from_json(doc["buyer_backend"], "buyer_backend");
  }
  if (doc.contains("seller_backend")) {
    config.seller_backend =
        backend_from_json(doc["seller_backend"], "seller_backend");
  }
  if (doc.contains("detector")) {
    const auto& d = doc["detector"];
    config.detector.type = d.value("type", std::string("scripted"));
    if (config.detector.type != "scripted" && config.detector.type != "live") {
      throw ConfigError("detector: unknown type '" + config.detector.type + "'");
    }
    if (config.detector.type == "live") config.detector.live = live_from_json(d);
  }
  if (doc.contains("ipip_responder")) {
    config.ipip_responder =
        backend_from_json(doc["ipip_responder"], "ipip_responder");
  }
  config.ipip_agents = doc.value("ipip_agents", std::size_t{300});
  config.workers = std::max<std::size_t>(1, doc.value("workers", std::size_t{1}));
  config.output_dir = doc.value("output_dir", std::string("out"));
  config.log_clamp = doc.value("log_clamp", 1e-6);
  config.max_reply_chars = doc.value("max_reply_chars", std::size_t{1200});
  config.strategy_min_count = doc.value("strategy_min_count", std::size_t{20});
  config.timestamps = doc.value("timestamps", std::string("deterministic"));
  if (config.timestamps != "deterministic" && config.timestamps != "wallclock") {
    throw ConfigError("timestamps must be 'deterministic' or 'wallclock'");
  }
  if (config.t_max < 2) throw ConfigError("t_max must be at least 2");
  if (!(config.zone_fraction > 0.0) || config.zone_fraction > 1.0) {
    throw ConfigError("zone_fraction must be in (0, 1]");
  }
  return config;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t hash = seed;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string config_fingerprint(const RunConfig& config) {
  json j;
  j["seed"] = config.seed;
  j["adjectives_per_dimension"] = config.adjectives_per_dimension;
  j["t_max"] = config.t_max;
  j["zone_fraction"] = config.zone_fraction;
  j["buyer_backend"] = backend_to_json(config.buyer_backend);
  j["seller_backend"] = backend_to_json(config.seller_backend);
  j["detector_type"] = config.detector.type;
  j["max_reply_chars"] = config.max_reply_chars;
  j["timestamps"] = config.timestamps;

  std::uint64_t hash = fnv1a64(j.dump());
  hash = fnv1a64(slurp(config.scenario_file), hash);
  hash = fnv1a64(slurp(config.adjective_file), hash);

  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace negsim
