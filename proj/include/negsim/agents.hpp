// Negotiation agents: the role prompt templates, the backend abstraction
// that turns (system instruction, dialogue history) into a reply, and the
// deterministic scripted negotiator that offers along the discounted price
// path and accepts once the opponent's offer crosses it.
#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "negsim/metrics.hpp"
#include "negsim/personality.hpp"
#include "negsim/price.hpp"
#include "negsim/random.hpp"
#include "negsim/role.hpp"
#include "negsim/scenario.hpp"

namespace negsim {

inline constexpr const char* kSellerOpener = "Hi, how can I help you?";

struct Utterance {
  std::size_t index = 0;  // 1-based round
  Role speaker = Role::seller;
  std::string text;
};

class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  // One reply for `self`, given the rendered system instruction and the
  // dialogue so far. Implementations never mutate the history. Throws
  // BackendUnavailable / BackendRefusal.
  virtual std::string generate(const std::string& system_prompt,
                               std::span<const Utterance> history,
                               Role self) = 0;
};

std::string render_buyer_prompt(const NegotiationScenario& scenario,
                                const PersonaInstruction& persona);
std::string render_seller_prompt(const NegotiationScenario& scenario,
                                 const PersonaInstruction& persona);

struct AgentConfig {
  Role role = Role::buyer;
  PersonaInstruction persona;
  const NegotiationScenario* scenario = nullptr;
  std::shared_ptr<GenerationBackend> backend;
  std::size_t max_reply_chars = 1200;
  std::string prompt;  // rendered role prompt
};

AgentConfig make_agent(Role role, PersonaInstruction persona,
                       const NegotiationScenario& scenario,
                       std::shared_ptr<GenerationBackend> backend,
                       std::size_t max_reply_chars = 1200);

struct Reply {
  std::string text;
  bool truncated = false;
};

// One reply attributed to agent.role. The buyer never opens; a seller with
// empty history returns the fixed opener. Over-long replies are cut at a
// sentence boundary and flagged.
Reply generate_reply(const AgentConfig& agent,
                     std::span<const Utterance> history);

// --- scripted negotiator ---------------------------------------------------

struct ScriptedAgentParams {
  double concession = 1.0;      // path exponent c; 0 never moves
  std::size_t path_rounds = 10; // T of the price path
  std::string strategy_tag;     // empty: bucket by concession exponent
  // Optional per-turn deviations, drawn from the dialogue rng when set.
  double dealbreak_prob = 0.0;
  double ponder_prob = 0.0;
};

// Deterministic agent whose offers follow the discounted price path between
// its ideal and reservation prices; it accepts as soon as the opponent's
// last offer is at least as good as its own current path value.
class ScriptedNegotiator : public GenerationBackend {
 public:
  ScriptedNegotiator(Role role, const NegotiationScenario& scenario,
                     ScriptedAgentParams params, Rng* rng = nullptr);

  std::string generate(const std::string& system_prompt,
                       std::span<const Utterance> history, Role self) override;

  // Cent-rounded path value at utterance index t (clamped to path_rounds).
  Price path_price(std::size_t t) const;

  const std::string& strategy_tag() const { return tag_; }

 private:
  Role role_;
  Price ideal_;
  Price reservation_;
  ScriptedAgentParams params_;
  std::string tag_;
  Rng* rng_;
};

// Fixed-reply backend for tests and live smoke checks.
class CannedBackend : public GenerationBackend {
 public:
  explicit CannedBackend(std::vector<std::string> replies)
      : replies_(std::move(replies)) {}

  std::string generate(const std::string&, std::span<const Utterance>,
                       Role) override;

 private:
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
};

}  // namespace negsim
