#include "negsim/dialogue.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "negsim/errors.hpp"
#include "negsim/textutil.hpp"

namespace negsim {

std::string_view to_string(NegotiationState s) {
  switch (s) {
    case NegotiationState::offer: return "offer";
    case NegotiationState::ponder: return "ponder";
    case NegotiationState::accept: return "accept";
    case NegotiationState::deal_break: return "deal_break";
    case NegotiationState::chit_chat: return "chit_chat";
  }
  return "?";
}

std::optional<NegotiationState> state_from_string(std::string_view s) {
  std::string key;
  for (char c : s) {
    if (c == '-' || c == '_' || c == ' ') continue;
    key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (key == "offer") return NegotiationState::offer;
  if (key == "ponder") return NegotiationState::ponder;
  if (key == "accept") return NegotiationState::accept;
  if (key == "dealbreak") return NegotiationState::deal_break;
  if (key == "chitchat") return NegotiationState::chit_chat;
  return std::nullopt;
}

std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::deal_break: return "deal_break";
    case FailureReason::max_rounds: return "max_rounds";
    case FailureReason::backend_error: return "backend_error";
  }
  return "?";
}

std::optional<FailureReason> failure_reason_from_string(std::string_view s) {
  if (s == "deal_break") return FailureReason::deal_break;
  if (s == "max_rounds") return FailureReason::max_rounds;
  if (s == "backend_error") return FailureReason::backend_error;
  return std::nullopt;
}

namespace {

std::optional<std::string> extract_strategy_tag(const std::string& text) {
  constexpr std::string_view kOpen = "[strategy:";
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  const auto begin = lower.find(kOpen);
  if (begin == std::string::npos) return std::nullopt;
  const auto end = text.find(']', begin + kOpen.size());
  if (end == std::string::npos) return std::nullopt;
  std::string tag = text.substr(begin + kOpen.size(),
                                end - begin - kOpen.size());
  while (!tag.empty() && tag.front() == ' ') tag.erase(tag.begin());
  while (!tag.empty() && tag.back() == ' ') tag.pop_back();
  if (tag.empty()) return std::nullopt;
  return tag;
}

}  // namespace

Detection detect_state_scripted(const std::string& text) {
  Detection det;
  det.strategy = extract_strategy_tag(text);
  det.price = extract_last_amount(text);
  if (contains_ci(text, "walk away") || contains_ci(text, "walking away") ||
      contains_ci(text, "no deal")) {
    det.state = NegotiationState::deal_break;
    return det;
  }
  if (contains_ci(text, "deal") || contains_ci(text, "accept")) {
    det.state = NegotiationState::accept;
    return det;
  }
  if (det.price) {
    det.state = NegotiationState::offer;
    return det;
  }
  const bool asks = text.find('?') != std::string::npos;
  if (asks && (contains_ci(text, "price") || contains_ci(text, "cost") ||
               contains_ci(text, "how much"))) {
    det.state = NegotiationState::ponder;
    return det;
  }
  det.state = NegotiationState::chit_chat;
  return det;
}

Detection ScriptedDetector::detect(std::span<const Utterance>,
                                   const Utterance& last, Role) {
  return detect_state_scripted(last.text);
}

std::string render_detector_prompt(std::span<const Utterance> dialogue,
                                   Role last_speaker) {
  std::string prompt =
      "You will be given a partial dialogue in which a buyer and a seller "
      "negotiate about a deal.\nPredict the average product price, dialogue "
      "state and the strategy of the ";
  prompt += to_string(last_speaker);
  prompt += " by the end of the dialogue.\n\n[The dialogue]\n";
  for (const Utterance& u : dialogue) {
    prompt += to_string(u.speaker);
    prompt += ": ";
    prompt += u.text;
    prompt += "\n";
  }
  prompt +=
      "\nRespond with a single JSON object of the form {\"state\": "
      "\"offer\"|\"ponder\"|\"accept\"|\"deal-break\"|\"chit-chat\", "
      "\"price\": <number or null>, \"strategy\": <string or null>}.";
  return prompt;
}

Detection parse_detector_reply(const std::string& reply) {
  Detection failed;
  failed.parse_failure = true;

  const auto begin = reply.find('{');
  const auto end = reply.rfind('}');
  if (begin == std::string::npos || end == std::string::npos || end < begin) {
    return failed;
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(reply.substr(begin, end - begin + 1));
  } catch (const nlohmann::json::exception&) {
    return failed;
  }
  if (!doc.is_object() || !doc.contains("state") ||
      !doc["state"].is_string()) {
    return failed;
  }
  const auto state = state_from_string(doc["state"].get<std::string>());
  if (!state) return failed;

  Detection det;
  det.state = *state;
  if (doc.contains("price")) {
    const auto& p = doc["price"];
    std::optional<Price> price;
    if (p.is_number()) {
      price = Price::from_double(p.get<double>());
    } else if (p.is_string()) {
      price = Price::parse(p.get<std::string>());
      if (!price) price = extract_last_amount(p.get<std::string>());
    }
    if (price && price->positive()) det.price = price;
  }
  if (doc.contains("strategy") && doc["strategy"].is_string()) {
    const std::string s = doc["strategy"].get<std::string>();
    if (!s.empty()) det.strategy = s;
  }
  // An offer without a usable price cannot stand as an offer.
  if (det.state == NegotiationState::offer && !det.price) {
    det.state = NegotiationState::ponder;
  }
  return det;
}

Detection LlmDetector::detect(std::span<const Utterance> context,
                              const Utterance& last, Role speaker) {
  std::vector<Utterance> full(context.begin(), context.end());
  full.push_back(last);
  const std::string prompt = render_detector_prompt(full, speaker);
  const std::string reply = backend_->generate(prompt, {}, speaker);
  return parse_detector_reply(reply);
}

DialogueRecord run_negotiation(const AgentConfig& seller,
                               const AgentConfig& buyer,
                               StateDetector& detector, std::size_t t_max) {
  if (seller.scenario == nullptr || seller.scenario != buyer.scenario) {
    throw Error("both agents must be bound to the same scenario");
  }
  if (seller.role != Role::seller || buyer.role != Role::buyer) {
    throw Error("agents passed in the wrong order");
  }
  if (t_max < 2) throw Error("t_max must be at least 2");

  DialogueRecord record;
  record.scenario = *seller.scenario;

  std::vector<Utterance> history;
  history.push_back({1, Role::seller, kSellerOpener});
  AnnotatedTurn opener;
  opener.utterance = history.back();
  opener.state = NegotiationState::chit_chat;
  record.turns.push_back(opener);

  auto last_offer_price = [&]() -> std::optional<Price> {
    for (auto it = record.turns.rbegin(); it != record.turns.rend(); ++it) {
      if (it->state == NegotiationState::offer && it->price) return it->price;
    }
    return std::nullopt;
  };

  for (std::size_t t = 2; t <= t_max; ++t) {
    const bool buyer_turn = t % 2 == 0;
    const AgentConfig& agent = buyer_turn ? buyer : seller;

    Reply reply;
    try {
      reply = generate_reply(agent, history);
    } catch (const Error& e) {
      record.outcome.success = false;
      record.outcome.reason = FailureReason::backend_error;
      record.outcome.detail = e.what();
      record.outcome.rounds = record.turns.size();
      return record;
    }

    Utterance utterance{t, agent.role, reply.text};
    AnnotatedTurn turn;
    turn.utterance = utterance;
    turn.truncated = reply.truncated;

    Detection det;
    try {
      det = detector.detect(history, utterance, agent.role);
    } catch (const Error& e) {
      history.push_back(utterance);
      record.turns.push_back(turn);
      record.outcome.success = false;
      record.outcome.reason = FailureReason::backend_error;
      record.outcome.detail = std::string("detector: ") + e.what();
      record.outcome.rounds = record.turns.size();
      return record;
    }
    turn.state = det.parse_failure ? NegotiationState::chit_chat : det.state;
    turn.price = det.price;
    turn.strategy = det.strategy;
    turn.detector_parse_failure = det.parse_failure;

    if (turn.state == NegotiationState::accept) {
      std::optional<Price> deal = turn.price ? turn.price : last_offer_price();
      if (deal) {
        history.push_back(utterance);
        record.turns.push_back(turn);
        record.outcome.success = true;
        record.outcome.deal_price = deal;
        record.outcome.rounds = record.turns.size();
        return record;
      }
      // Acceptance with no price on record cannot settle a deal; degrade to
      // chit-chat (flagged) and keep negotiating.
      turn.state = NegotiationState::chit_chat;
      turn.detector_parse_failure = true;
    }

    history.push_back(utterance);
    record.turns.push_back(turn);

    if (turn.state == NegotiationState::deal_break) {
      record.outcome.success = false;
      record.outcome.reason = FailureReason::deal_break;
      record.outcome.rounds = record.turns.size();
      return record;
    }
  }

  record.outcome.success = false;
  record.outcome.reason = FailureReason::max_rounds;
  record.outcome.rounds = record.turns.size();
  return record;
}

}  // namespace negsim
