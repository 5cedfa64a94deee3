// JSONL persistence of dialogue records. Keys are emitted sorted, prices as
// plain numbers, so a record serializes to the same bytes on every run.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "negsim/dialogue.hpp"

namespace negsim {

nlohmann::json record_to_json(const DialogueRecord& record);
DialogueRecord record_from_json(const nlohmann::json& j);

struct Corpus {
  std::vector<DialogueRecord> records;
  std::string fingerprint;  // uniform fingerprint, empty when mixed + forced
};

// Loads a JSONL corpus, skipping blank lines. Throws ParseError on malformed
// lines (with line number) and on mixed fingerprints unless force is set.
Corpus load_corpus(const std::string& path, bool force = false);

}  // namespace negsim
