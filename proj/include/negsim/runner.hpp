// Batch orchestration: runs the requested dialogues over a bounded worker
// pool, appends records to a JSONL corpus in id order, and writes a manifest.
// A restarted run keeps the completed prefix and continues from there.
#pragma once

#include <cstdint>
#include <ctime>
#include <string>

#include "negsim/config.hpp"
#include "negsim/dialogue.hpp"

namespace negsim {

struct RunManifest {
  std::string fingerprint;
  std::size_t requested = 0;
  std::size_t completed = 0;  // successful negotiations
  std::size_t failed_deal_break = 0;
  std::size_t failed_max_rounds = 0;
  std::size_t failed_backend_error = 0;
  std::string started_at;
  std::string finished_at;
};

// Runs one dialogue of the batch; exposed for tests and the live smoke path.
DialogueRecord simulate_dialogue(const RunConfig& config,
                                 const std::string& fingerprint,
                                 std::size_t id,
                                 const std::vector<NegotiationScenario>& scenarios,
                                 const AdjectiveTable& adjectives,
                                 const std::shared_ptr<GenerationBackend>& shared_buyer,
                                 const std::shared_ptr<GenerationBackend>& shared_seller,
                                 const std::shared_ptr<GenerationBackend>& shared_detector);

// simulate: writes <output_dir>/transcripts.jsonl and manifest.json.
RunManifest cmd_simulate(const RunConfig& config);

// ISO-8601 UTC. Deterministic mode stamps a fixed base (2024-01-01T00:00:00Z)
// plus the dialogue id in seconds, so reruns are byte-identical.
std::string iso_timestamp(std::time_t seconds);
std::string deterministic_timestamp(std::size_t dialogue_id);

}  // namespace negsim
