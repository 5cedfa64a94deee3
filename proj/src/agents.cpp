#include "negsim/agents.hpp"

#include <cmath>

#include "negsim/errors.hpp"
#include "negsim/textutil.hpp"

namespace negsim {

std::string render_buyer_prompt(const NegotiationScenario& scenario,
                                const PersonaInstruction& persona) {
  return "Act as a buyer and try to strike a deal for a " + scenario.product +
         " with a lower price through conversation. Your reply should not be "
         "too long. You would like to pay for " +
         scenario.buyer_ideal.str() +
         ". You can accept a higher price if the item is really good or "
         "there are other perks.\n\n" +
         persona.rendered;
}

std::string render_seller_prompt(const NegotiationScenario& scenario,
                                 const PersonaInstruction& persona) {
  return "Act as a seller that sells a " + scenario.product +
         ", bargains with the buyer to get a higher deal price. Your reply "
         "should not be too long. our listing price for this item is " +
         scenario.seller_ideal.str() +
         ". The detail of the product is the following: \n" +
         scenario.description + "\n\n" + persona.rendered;
}

AgentConfig make_agent(Role role, PersonaInstruction persona,
                       const NegotiationScenario& scenario,
                       std::shared_ptr<GenerationBackend> backend,
                       std::size_t max_reply_chars) {
  AgentConfig agent;
  agent.role = role;
  agent.persona = std::move(persona);
  agent.scenario = &scenario;
  agent.backend = std::move(backend);
  agent.max_reply_chars = max_reply_chars;
  agent.prompt = role == Role::buyer
                     ? render_buyer_prompt(scenario, agent.persona)
                     : render_seller_prompt(scenario, agent.persona);
  return agent;
}

Reply generate_reply(const AgentConfig& agent,
                     std::span<const Utterance> history) {
  if (history.empty()) {
    if (agent.role == Role::buyer) {
      throw Error("protocol violation: the buyer never opens");
    }
    return {kSellerOpener, false};
  }
  if (history.back().speaker == agent.role) {
    throw Error("protocol violation: agent cannot reply to itself");
  }
  const std::string raw =
      agent.backend->generate(agent.prompt, history, agent.role);
  bool blank = true;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      blank = false;
      break;
    }
  }
  if (blank) throw BackendRefusal("backend returned an empty reply");
  auto cut = truncate_at_sentence(raw, agent.max_reply_chars);
  return {std::move(cut.text), cut.truncated};
}

namespace {

std::string tag_for_concession(double c) {
  if (c < 0.6) return "assertive, take-it-or-leave-it stance";
  if (c < 1.5) return "emphasize the value of the item";
  return "conceding, meet halfway";
}

}  // namespace

ScriptedNegotiator::ScriptedNegotiator(Role role,
                                       const NegotiationScenario& scenario,
                                       ScriptedAgentParams params, Rng* rng)
    : role_(role), params_(params), rng_(rng) {
  if (role == Role::seller) {
    ideal_ = scenario.seller_ideal;
    reservation_ = scenario.seller_reservation;
  } else {
    ideal_ = scenario.buyer_ideal;
    reservation_ = scenario.buyer_reservation;
  }
  tag_ = params_.strategy_tag.empty() ? tag_for_concession(params_.concession)
                                      : params_.strategy_tag;
}

Price ScriptedNegotiator::path_price(std::size_t t) const {
  const std::size_t u = std::min(t, params_.path_rounds);
  // The path interpolates from the ideal price at t=0 to the reservation
  // price at t=T; the seller's path descends, the buyer's ascends.
  double value;
  if (role_ == Role::seller) {
    value = scripted_price_path(reservation_.dollars(), ideal_.dollars(),
                                params_.concession, params_.path_rounds, u);
  } else {
    const double lo = ideal_.dollars();
    const double hi = reservation_.dollars();
    value = lo + hi -
            scripted_price_path(lo, hi, params_.concession,
                                params_.path_rounds, u);
  }
  return Price::from_double(value);
}

std::string ScriptedNegotiator::generate(const std::string&,
                                         std::span<const Utterance> history,
                                         Role self) {
  if (self != role_) throw Error("scripted negotiator bound to other role");
  const std::size_t t = history.size() + 1;

  std::optional<Price> opponent_offer;
  if (!history.empty() && history.back().speaker == opponent(role_)) {
    opponent_offer = extract_last_amount(history.back().text);
  }
  const Price threshold = path_price(t);
  if (opponent_offer) {
    const bool good = role_ == Role::seller ? *opponent_offer >= threshold
                                            : *opponent_offer <= threshold;
    if (good) return "Okay, it's a deal.";
  }
  if (rng_ != nullptr) {
    if (params_.dealbreak_prob > 0.0 &&
        uniform_unit(*rng_) < params_.dealbreak_prob) {
      return "No deal, I am walking away.";
    }
    if (params_.ponder_prob > 0.0 &&
        uniform_unit(*rng_) < params_.ponder_prob) {
      return "Is that the best price you can do?";
    }
  }
  return "I can do $" + threshold.str() + ". [strategy: " + tag_ + "]";
}

std::string CannedBackend::generate(const std::string&,
                                    std::span<const Utterance>, Role) {
  if (replies_.empty()) throw BackendRefusal("canned backend has no replies");
  const std::string& reply = replies_[std::min(next_, replies_.size() - 1)];
  ++next_;
  return reply;
}

}  // namespace negsim
