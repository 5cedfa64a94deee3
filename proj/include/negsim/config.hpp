// Run configuration: one JSON file drives a batch. The fingerprint hashes
// every knob that shapes an individual dialogue (plus the data files), so
// transcripts carry their provenance; batch-level knobs (count, workers,
// output paths) stay out of it so interrupted runs can resume.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "negsim/http_backend.hpp"

namespace negsim {

struct BackendSpec {
  std::string type = "scripted";  // scripted | live | canned

  // scripted
  double concession = 1.0;
  std::size_t path_rounds = 10;
  double dealbreak_prob = 0.0;
  double ponder_prob = 0.0;
  std::string strategy_tag;           // empty: bucket by concession
  std::string concession_from_trait;  // e.g. "AGR": exponent from the level
  double concession_min = 0.2;
  double concession_max = 3.0;

  // canned
  std::vector<std::string> replies;

  // live
  LiveBackendConfig live;
};

struct DetectorSpec {
  std::string type = "scripted";  // scripted | live
  LiveBackendConfig live;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::string scenario_file;
  std::size_t dialogues = 0;
  std::size_t adjectives_per_dimension = 3;
  std::size_t t_max = 20;
  double zone_fraction = 0.7;
  std::string adjective_file = "data/adjectives.tsv";
  std::string strategy_map_file = "data/strategy_map.tsv";
  std::string ipip_items_file = "data/ipip50.tsv";
  BackendSpec buyer_backend;
  BackendSpec seller_backend;
  DetectorSpec detector;
  BackendSpec ipip_responder;  // scripted | live
  std::size_t ipip_agents = 300;
  std::size_t workers = 1;
  std::string output_dir = "out";
  double log_clamp = 1e-6;
  std::size_t max_reply_chars = 1200;
  std::size_t strategy_min_count = 20;
  std::string timestamps = "deterministic";  // or "wallclock"
};

RunConfig load_config(const std::string& path);

// FNV-1a over the per-dialogue configuration and the bytes of the scenario
// and adjective files.
std::string config_fingerprint(const RunConfig& config);

std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace negsim
