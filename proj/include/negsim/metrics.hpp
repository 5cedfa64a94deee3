// Per-dialogue economic measurements: intrinsic and joint utility of a deal
// price, log-sum concession rates over an agent's own offers, and the corpus
// aggregates (success rate, average rounds of successful negotiations).
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "negsim/price.hpp"
#include "negsim/role.hpp"
#include "negsim/scenario.hpp"

namespace negsim {

struct UtilityValue {
  double value = 0.0;
  bool out_of_range = false;  // outside the nominal [0, 1] band
};

// Seller: (p - reservation) / (ideal - reservation), rising toward the
// listing price. Buyer: (reservation - p) / (reservation - ideal), rising
// toward the target price. Values are reported unclamped; offers outside the
// private interval simply flag out_of_range.
UtilityValue intrinsic_utility(Role role, double price,
                               const NegotiationScenario& scenario);

// (p - seller_reservation)(buyer_reservation - p) / zone_width^2.
// Maximum 0.25 at the zone midpoint; negative outside the zone.
UtilityValue joint_utility(double price, const NegotiationScenario& scenario);

struct TimedOffer {
  std::size_t round = 0;  // 1-based utterance index
  Price price;
};

struct ConcessionRate {
  double value = 0.0;
  bool empty = false;  // role made no offers; value is 0 by convention
  std::size_t offer_count = 0;
};

inline constexpr double kDefaultLogClamp = 1e-6;

// Sum over the role's own offers of log of the normalized remaining-distance
// ratio (seller: (ideal - p_t)/zone width; buyer: (p_t - ideal)/zone width).
// Each ratio is clamped below at `clamp` before the log, which keeps the sum
// finite when an offer sits exactly at the agent's ideal price.
ConcessionRate concession_rate(Role role, std::span<const TimedOffer> offers,
                               const NegotiationScenario& scenario,
                               double clamp = kDefaultLogClamp);

// Discounted price path: reservation + (ideal - reservation)*((T-t)/T)^c as
// distances, expressed in the (low, high) parameterization where t=0 yields
// the high endpoint and t=T the low one. Exponent c >= 0; c=0 never moves.
double scripted_price_path(double low, double high, double concession,
                           std::size_t total_rounds, std::size_t t);

// N_succ / N over outcome flags.
double success_rate(std::span<const bool> successes);

// Mean round count over successful dialogues only.
double avg_rounds(std::span<const bool> successes,
                  std::span<const std::size_t> rounds);

struct MetricsRow {
  std::size_t dialogue_id = 0;
  bool success = false;
  std::size_t rounds = 0;
  std::string category;
  double product_price = 0.0;  // listing, used by the length analysis
  std::size_t word_count = 0;

  // Present only on success.
  std::optional<double> seller_utility;
  std::optional<double> buyer_utility;
  std::optional<double> joint;
  bool out_of_range = false;

  // Present whenever the role made at least one offer.
  std::optional<double> seller_concession;
  std::optional<double> buyer_concession;
};

struct CorpusSummary {
  std::size_t total = 0;
  std::size_t successes = 0;
  double nsr = 0.0;
  std::optional<double> anr;  // absent when no dialogue succeeded
  std::size_t failed_deal_break = 0;
  std::size_t failed_max_rounds = 0;
  std::size_t failed_backend_error = 0;
};

}  // namespace negsim
