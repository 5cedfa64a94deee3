// The alternating-offers simulation loop. The seller opens with a fixed
// greeting; after every generated utterance a state detector annotates it
// with (state, offer price, strategy); the loop halts on Accept, Deal-break,
// a backend failure, or the round cap. Every started dialogue yields a
// record -- failures are outcomes, not aborts.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "negsim/agents.hpp"
#include "negsim/personality.hpp"
#include "negsim/price.hpp"
#include "negsim/scenario.hpp"

namespace negsim {

enum class NegotiationState : std::uint8_t {
  offer,
  ponder,
  accept,
  deal_break,
  chit_chat
};

std::string_view to_string(NegotiationState s);
std::optional<NegotiationState> state_from_string(std::string_view s);

struct AnnotatedTurn {
  Utterance utterance;
  NegotiationState state = NegotiationState::chit_chat;
  std::optional<Price> price;
  std::optional<std::string> strategy;
  bool detector_parse_failure = false;
  bool truncated = false;
};

enum class FailureReason : std::uint8_t {
  deal_break,
  max_rounds,
  backend_error
};

std::string_view to_string(FailureReason r);
std::optional<FailureReason> failure_reason_from_string(std::string_view s);

struct Outcome {
  bool success = false;
  std::optional<Price> deal_price;  // set on success
  std::size_t rounds = 0;           // T, number of utterances
  std::optional<FailureReason> reason;
  std::string detail;  // backend error text when applicable
};

struct DialogueRecord {
  std::size_t id = 0;
  NegotiationScenario scenario;
  PersonalityProfile buyer_profile;
  PersonalityProfile seller_profile;
  std::vector<AnnotatedTurn> turns;
  Outcome outcome;
  std::uint64_t seed = 0;
  std::string fingerprint;
  std::string timestamp;  // ISO-8601
};

struct Detection {
  NegotiationState state = NegotiationState::chit_chat;
  std::optional<Price> price;
  std::optional<std::string> strategy;
  bool parse_failure = false;
};

class StateDetector {
 public:
  virtual ~StateDetector() = default;
  // Annotates the last utterance given the full prior context. Never alters
  // the transcript. Malformed detector output is reported via parse_failure,
  // not an exception; backend transport failures may throw.
  virtual Detection detect(std::span<const Utterance> context,
                           const Utterance& last, Role speaker) = 0;
};

// Rule-based total function: deal-break keywords beat accept keywords, a
// detected amount makes an offer, a price question ponders, anything else is
// chit-chat. The price is the last amount mentioned; the strategy comes from
// a "[strategy: ...]" tag when the speaker embeds one.
Detection detect_state_scripted(const std::string& text);

class ScriptedDetector : public StateDetector {
 public:
  Detection detect(std::span<const Utterance> context, const Utterance& last,
                   Role speaker) override;
};

// Structured-extraction detector: renders the detector prompt over the full
// dialogue, issues one backend call, and parses a JSON triple out of the
// reply. Parse failures degrade the turn to chit-chat with a flag.
class LlmDetector : public StateDetector {
 public:
  explicit LlmDetector(std::shared_ptr<GenerationBackend> backend)
      : backend_(std::move(backend)) {}

  Detection detect(std::span<const Utterance> context, const Utterance& last,
                   Role speaker) override;

 private:
  std::shared_ptr<GenerationBackend> backend_;
};

std::string render_detector_prompt(std::span<const Utterance> dialogue,
                                   Role last_speaker);
Detection parse_detector_reply(const std::string& reply);

inline constexpr std::size_t kDefaultMaxRounds = 20;

DialogueRecord run_negotiation(const AgentConfig& seller,
                               const AgentConfig& buyer,
                               StateDetector& detector,
                               std::size_t t_max = kDefaultMaxRounds);

}  // namespace negsim
