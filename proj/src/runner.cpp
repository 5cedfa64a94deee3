#include "negsim/runner.hpp"

#include <condition_variable>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "negsim/errors.hpp"
#include "negsim/serialize.hpp"

namespace negsim {

std::string iso_timestamp(std::time_t seconds) {
  std::tm tm{};
  gmtime_r(&seconds, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string deterministic_timestamp(std::size_t dialogue_id) {
  // 2024-01-01T00:00:00Z
  constexpr std::time_t kBase = 1704067200;
  return iso_timestamp(kBase + static_cast<std::time_t>(dialogue_id));
}

namespace {

std::size_t trait_level_index(const TraitLevel& level) {
  const int o = level.ordinal();
  return static_cast<std::size_t>(o < 0 ? o + 3 : o + 2);  // 0..5
}

std::shared_ptr<GenerationBackend> build_backend(
    const BackendSpec& spec, Role role, const NegotiationScenario& scenario,
    const PersonalityProfile& profile, Rng* rng,
    const std::shared_ptr<GenerationBackend>& shared_live) {
  if (spec.type == "live") return shared_live;
  if (spec.type == "canned") {
    return std::make_shared<CannedBackend>(spec.replies);
  }
  ScriptedAgentParams params;
  params.concession = spec.concession;
  params.path_rounds = spec.path_rounds;
  params.dealbreak_prob = spec.dealbreak_prob;
  params.ponder_prob = spec.ponder_prob;
  params.strategy_tag = spec.strategy_tag;
  if (!spec.concession_from_trait.empty()) {
    const Dimension dim =
        *dimension_from_string(spec.concession_from_trait);
    const double step =
        (spec.concession_max - spec.concession_min) / 5.0;
    params.concession = spec.concession_min +
                        static_cast<double>(trait_level_index(profile[dim])) *
                            step;
  }
  return std::make_shared<ScriptedNegotiator>(role, scenario, params, rng);
}

}  // namespace

DialogueRecord simulate_dialogue(
    const RunConfig& config, const std::string& fingerprint, std::size_t id,
    const std::vector<NegotiationScenario>& scenarios,
    const AdjectiveTable& adjectives,
    const std::shared_ptr<GenerationBackend>& shared_buyer,
    const std::shared_ptr<GenerationBackend>& shared_seller,
    const std::shared_ptr<GenerationBackend>& shared_detector) {
  Rng rng = make_rng(config.seed, id);
  const NegotiationScenario& scenario = scenarios[id % scenarios.size()];

  const PersonalityProfile buyer_profile = sample_profile(rng);
  PersonaInstruction buyer_persona = make_persona(
      buyer_profile, adjectives, config.adjectives_per_dimension, rng);
  const PersonalityProfile seller_profile = sample_profile(rng);
  PersonaInstruction seller_persona = make_persona(
      seller_profile, adjectives, config.adjectives_per_dimension, rng);

  auto buyer_backend = build_backend(config.buyer_backend, Role::buyer,
                                     scenario, buyer_profile, &rng,
                                     shared_buyer);
  auto seller_backend = build_backend(config.seller_backend, Role::seller,
                                      scenario, seller_profile, &rng,
                                      shared_seller);

  const AgentConfig buyer =
      make_agent(Role::buyer, std::move(buyer_persona), scenario,
                 buyer_backend, config.max_reply_chars);
  const AgentConfig seller =
      make_agent(Role::seller, std::move(seller_persona), scenario,
                 seller_backend, config.max_reply_chars);

  ScriptedDetector scripted_detector;
  std::unique_ptr<LlmDetector> llm_detector;
  StateDetector* detector = &scripted_detector;
  if (config.detector.type == "live") {
    llm_detector = std::make_unique<LlmDetector>(shared_detector);
    detector = llm_detector.get();
  }

  DialogueRecord record =
      run_negotiation(seller, buyer, *detector, config.t_max);
  record.id = id;
  record.seed = config.seed;
  record.fingerprint = fingerprint;
  record.buyer_profile = buyer_profile;
  record.seller_profile = seller_profile;
  record.timestamp = config.timestamps == "deterministic"
                         ? deterministic_timestamp(id)
                         : iso_timestamp(std::time(nullptr));
  return record;
}

namespace {

// Counts the complete leading records of an existing corpus that match the
// fingerprint and the id sequence; anything after that point (a mismatch or
// a line truncated by a kill) is discarded on resume.
std::size_t resumable_prefix(const std::string& path,
                             const std::string& fingerprint,
                             std::vector<std::string>& keep_lines) {
  std::ifstream in(path);
  if (!in) return 0;
  std::string line;
  std::size_t next_id = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (j.value("fingerprint", std::string()) != fingerprint) break;
      if (j.value("id", std::size_t(-1)) != next_id) break;
    } catch (const nlohmann::json::exception&) {
      break;
    }
    keep_lines.push_back(line);
    ++next_id;
  }
  return next_id;
}

}  // namespace

RunManifest cmd_simulate(const RunConfig& config) {
  if (config.scenario_file.empty()) {
    throw ConfigError("config has no scenario_file");
  }
  const auto scenarios =
      load_scenarios(config.scenario_file, config.zone_fraction);
  if (scenarios.empty() && config.dialogues > 0) {
    throw ConfigError("scenario file is empty");
  }
  const auto adjectives = load_adjective_table(config.adjective_file);
  const std::string fingerprint = config_fingerprint(config);

  std::filesystem::create_directories(config.output_dir);
  const std::string corpus_path = config.output_dir + "/transcripts.jsonl";

  RunManifest manifest;
  manifest.fingerprint = fingerprint;
  manifest.requested = config.dialogues;
  manifest.started_at = iso_timestamp(std::time(nullptr));

  // Resume: keep the valid prefix, drop any trailing partial line.
  std::vector<std::string> keep_lines;
  std::size_t first_id = 0;
  if (std::filesystem::exists(corpus_path)) {
    first_id = resumable_prefix(corpus_path, fingerprint, keep_lines);
    if (first_id > config.dialogues) {
      keep_lines.resize(config.dialogues);
      first_id = config.dialogues;
    }
    std::ofstream rewrite(corpus_path, std::ios::trunc);
    for (const std::string& line : keep_lines) rewrite << line << "\n";
  }

  // Shared backends: live backends are shared so the request-rate ceiling
  // applies across workers; scripted/canned ones are built per dialogue.
  std::shared_ptr<GenerationBackend> shared_buyer, shared_seller,
      shared_detector;
  if (config.buyer_backend.type == "live") {
    shared_buyer = std::make_shared<HttpChatBackend>(config.buyer_backend.live);
  }
  if (config.seller_backend.type == "live") {
    shared_seller =
        std::make_shared<HttpChatBackend>(config.seller_backend.live);
  }
  if (config.detector.type == "live") {
    shared_detector = std::make_shared<HttpChatBackend>(config.detector.live);
  }

  std::ofstream out(corpus_path, std::ios::app);
  if (!out) throw ConfigError("cannot write corpus: " + corpus_path);

  std::mutex mutex;
  std::condition_variable writable;
  std::map<std::size_t, DialogueRecord> pending;
  std::size_t next_to_write = first_id;
  std::size_t next_id = first_id;
  std::exception_ptr failure;

  auto account = [&manifest](const DialogueRecord& record) {
    if (record.outcome.success) {
      manifest.completed += 1;
    } else if (record.outcome.reason == FailureReason::deal_break) {
      manifest.failed_deal_break += 1;
    } else if (record.outcome.reason == FailureReason::max_rounds) {
      manifest.failed_max_rounds += 1;
    } else {
      manifest.failed_backend_error += 1;
    }
  };

  // Account for the resumed prefix.
  for (const std::string& line : keep_lines) {
    account(record_from_json(nlohmann::json::parse(line)));
  }

  auto worker = [&]() {
    while (true) {
      std::size_t id;
      {
        std::lock_guard lock(mutex);
        if (failure || next_id >= config.dialogues) return;
        id = next_id++;
      }
      try {
        DialogueRecord record =
            simulate_dialogue(config, fingerprint, id, scenarios, adjectives,
                              shared_buyer, shared_seller, shared_detector);
        std::lock_guard lock(mutex);
        pending.emplace(id, std::move(record));
        writable.notify_all();
      } catch (...) {
        std::lock_guard lock(mutex);
        failure = std::current_exception();
        writable.notify_all();
        return;
      }
    }
  };

  const std::size_t n_workers =
      std::min<std::size_t>(std::max<std::size_t>(config.workers, 1),
                            std::max<std::size_t>(config.dialogues, 1));
  std::vector<std::thread> threads;
  threads.reserve(n_workers);
  for (std::size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);

  // Single writer drains completed records in id order.
  {
    std::unique_lock lock(mutex);
    while (next_to_write < config.dialogues) {
      writable.wait(lock, [&] {
        return failure || pending.count(next_to_write) > 0;
      });
      if (failure && pending.count(next_to_write) == 0) break;
      DialogueRecord record = std::move(pending.at(next_to_write));
      pending.erase(next_to_write);
      lock.unlock();
      account(record);
      out << record_to_json(record).dump() << "\n";
      lock.lock();
      ++next_to_write;
    }
  }
  for (std::thread& t : threads) t.join();
  out.flush();
  if (failure) std::rethrow_exception(failure);

  manifest.finished_at = iso_timestamp(std::time(nullptr));

  nlohmann::json mj;
  mj["fingerprint"] = manifest.fingerprint;
  mj["requested"] = manifest.requested;
  mj["completed"] = manifest.completed;
  mj["failed"] = {{"deal_break", manifest.failed_deal_break},
                  {"max_rounds", manifest.failed_max_rounds},
                  {"backend_error", manifest.failed_backend_error}};
  mj["started_at"] = manifest.started_at;
  mj["finished_at"] = manifest.finished_at;
  std::ofstream mout(config.output_dir + "/manifest.json");
  mout << mj.dump(2) << "\n";
  return manifest;
}

}  // namespace negsim
