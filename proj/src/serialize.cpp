#include "negsim/serialize.hpp"

#include <fstream>

#include "negsim/errors.hpp"

namespace negsim {

namespace {

using nlohmann::json;

json profile_to_json(const PersonalityProfile& profile) {
  json j;
  for (Dimension d : kAllDimensions) {
    j[std::string(to_string(d))] = profile[d].str();
  }
  return j;
}

PersonalityProfile profile_from_json(const json& j) {
  PersonalityProfile profile;
  for (Dimension d : kAllDimensions) {
    const std::string key(to_string(d));
    if (!j.contains(key) || !j[key].is_string()) {
      throw ParseError("profile missing dimension " + key);
    }
    const auto level = TraitLevel::parse(j[key].get<std::string>());
    if (!level) throw ParseError("bad trait level for " + key);
    profile[d] = *level;
  }
  return profile;
}

Price price_from_json(const json& v, const char* what) {
  if (v.is_number()) return Price::from_double(v.get<double>());
  if (v.is_string()) {
    if (auto p = Price::parse(v.get<std::string>())) return *p;
  }
  throw ParseError(std::string("bad price field: ") + what);
}

}  // namespace

json record_to_json(const DialogueRecord& record) {
  json j;
  j["id"] = record.id;
  j["seed"] = record.seed;
  j["fingerprint"] = record.fingerprint;
  j["timestamp"] = record.timestamp;

  json scenario;
  scenario["product"] = record.scenario.product;
  scenario["description"] = record.scenario.description;
  scenario["category"] = record.scenario.category;
  scenario["seller_ideal"] = record.scenario.seller_ideal.dollars();
  scenario["buyer_ideal"] = record.scenario.buyer_ideal.dollars();
  scenario["seller_reservation"] = record.scenario.seller_reservation.dollars();
  scenario["buyer_reservation"] = record.scenario.buyer_reservation.dollars();
  scenario["zone_fraction"] = record.scenario.zone_fraction;
  j["scenario"] = std::move(scenario);

  j["buyer_profile"] = profile_to_json(record.buyer_profile);
  j["seller_profile"] = profile_to_json(record.seller_profile);

  json turns = json::array();
  for (const AnnotatedTurn& turn : record.turns) {
    json t;
    t["t"] = turn.utterance.index;
    t["speaker"] = std::string(to_string(turn.utterance.speaker));
    t["text"] = turn.utterance.text;
    t["state"] = std::string(to_string(turn.state));
    t["price"] = turn.price ? json(turn.price->dollars()) : json(nullptr);
    t["strategy"] = turn.strategy ? json(*turn.strategy) : json(nullptr);
    t["parse_failure"] = turn.detector_parse_failure;
    t["truncated"] = turn.truncated;
    turns.push_back(std::move(t));
  }
  j["turns"] = std::move(turns);

  json outcome;
  outcome["success"] = record.outcome.success;
  outcome["rounds"] = record.outcome.rounds;
  if (record.outcome.success) {
    outcome["deal_price"] = record.outcome.deal_price->dollars();
  } else {
    outcome["reason"] = record.outcome.reason
                            ? std::string(to_string(*record.outcome.reason))
                            : std::string();
    if (!record.outcome.detail.empty()) {
      outcome["detail"] = record.outcome.detail;
    }
  }
  j["outcome"] = std::move(outcome);
  return j;
}

DialogueRecord record_from_json(const json& j) {
  DialogueRecord record;
  record.id = j.at("id").get<std::size_t>();
  record.seed = j.value("seed", std::uint64_t{0});
  record.fingerprint = j.value("fingerprint", std::string());
  record.timestamp = j.value("timestamp", std::string());

  const json& s = j.at("scenario");
  record.scenario.product = s.value("product", std::string());
  record.scenario.description = s.value("description", std::string());
  record.scenario.category = s.value("category", std::string());
  record.scenario.seller_ideal = price_from_json(s.at("seller_ideal"), "seller_ideal");
  record.scenario.buyer_ideal = price_from_json(s.at("buyer_ideal"), "buyer_ideal");
  record.scenario.seller_reservation =
      price_from_json(s.at("seller_reservation"), "seller_reservation");
  record.scenario.buyer_reservation =
      price_from_json(s.at("buyer_reservation"), "buyer_reservation");
  record.scenario.zone_fraction = s.value("zone_fraction", 0.7);

  record.buyer_profile = profile_from_json(j.at("buyer_profile"));
  record.seller_profile = profile_from_json(j.at("seller_profile"));

  for (const json& t : j.at("turns")) {
    AnnotatedTurn turn;
    turn.utterance.index = t.at("t").get<std::size_t>();
    const auto speaker = role_from_string(t.at("speaker").get<std::string>());
    if (!speaker) throw ParseError("bad speaker in turn");
    turn.utterance.speaker = *speaker;
    turn.utterance.text = t.at("text").get<std::string>();
    const auto state = state_from_string(t.at("state").get<std::string>());
    if (!state) throw ParseError("bad state in turn");
    turn.state = *state;
    if (t.contains("price") && !t["price"].is_null()) {
      turn.price = price_from_json(t["price"], "turn price");
    }
    if (t.contains("strategy") && t["strategy"].is_string()) {
      turn.strategy = t["strategy"].get<std::string>();
    }
    turn.detector_parse_failure = t.value("parse_failure", false);
    turn.truncated = t.value("truncated", false);
    record.turns.push_back(std::move(turn));
  }

  const json& o = j.at("outcome");
  record.outcome.success = o.at("success").get<bool>();
  record.outcome.rounds = o.at("rounds").get<std::size_t>();
  if (record.outcome.success) {
    record.outcome.deal_price = price_from_json(o.at("deal_price"), "deal_price");
  } else if (o.contains("reason")) {
    record.outcome.reason =
        failure_reason_from_string(o.at("reason").get<std::string>());
    record.outcome.detail = o.value("detail", std::string());
  }
  return record;
}

Corpus load_corpus(const std::string& path, bool force) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus: " + path);
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    DialogueRecord record;
    try {
      record = record_from_json(j);
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (corpus.records.empty()) {
      corpus.fingerprint = record.fingerprint;
    } else if (record.fingerprint != corpus.fingerprint) {
      if (!force) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": mixed config fingerprints (use force to override)");
      }
      corpus.fingerprint.clear();
    }
    corpus.records.push_back(std::move(record));
  }
  std::sort(corpus.records.begin(), corpus.records.end(),
            [](const DialogueRecord& a, const DialogueRecord& b) {
              return a.id < b.id;
            });
  return corpus;
}

}  // namespace negsim
