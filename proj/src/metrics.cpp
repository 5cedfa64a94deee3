#include "negsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "negsim/errors.hpp"

namespace negsim {

std::string_view to_string(Role r) {
  return r == Role::buyer ? "buyer" : "seller";
}

std::optional<Role> role_from_string(std::string_view s) {
  if (s == "buyer") return Role::buyer;
  if (s == "seller") return Role::seller;
  return std::nullopt;
}

UtilityValue intrinsic_utility(Role role, double price,
                               const NegotiationScenario& scenario) {
  double value;
  if (role == Role::seller) {
    const double lo = scenario.seller_reservation.dollars();
    const double hi = scenario.seller_ideal.dollars();
    if (hi == lo) throw DegenerateInterval("seller interval has zero width");
    value = (price - lo) / (hi - lo);
  } else {
    const double lo = scenario.buyer_ideal.dollars();
    const double hi = scenario.buyer_reservation.dollars();
    if (hi == lo) throw DegenerateInterval("buyer interval has zero width");
    value = (hi - price) / (hi - lo);
  }
  return {value, value < 0.0 || value > 1.0};
}

UtilityValue joint_utility(double price, const NegotiationScenario& scenario) {
  const double lo = scenario.seller_reservation.dollars();
  const double hi = scenario.buyer_reservation.dollars();
  if (hi <= lo) throw DegenerateInterval("agreement zone is empty");
  const double w = hi - lo;
  const double value = (price - lo) * (hi - price) / (w * w);
  return {value, value < 0.0 || value > 0.25 + 1e-12};
}

ConcessionRate concession_rate(Role role, std::span<const TimedOffer> offers,
                               const NegotiationScenario& scenario,
                               double clamp) {
  ConcessionRate cr;
  if (offers.empty()) {
    cr.empty = true;
    return cr;
  }
  double ideal, width;
  if (role == Role::seller) {
    ideal = scenario.seller_ideal.dollars();
    width = ideal - scenario.seller_reservation.dollars();
  } else {
    ideal = scenario.buyer_ideal.dollars();
    width = scenario.buyer_reservation.dollars() - ideal;
  }
  if (width == 0.0) throw DegenerateInterval("zero-width price interval");
  double sum = 0.0;
  for (const TimedOffer& offer : offers) {
    const double p = offer.price.dollars();
    const double ratio =
        role == Role::seller ? (ideal - p) / width : (p - ideal) / width;
    sum += std::log(std::max(ratio, clamp));
  }
  cr.value = sum;
  cr.offer_count = offers.size();
  return cr;
}

double scripted_price_path(double low, double high, double concession,
                           std::size_t total_rounds, std::size_t t) {
  if (total_rounds == 0 || t > total_rounds) {
    throw Error("price path requires 0 <= t <= T with T > 0");
  }
  if (concession < 0.0) throw Error("concession exponent must be >= 0");
  const double frac = static_cast<double>(total_rounds - t) /
                      static_cast<double>(total_rounds);
  return low + (high - low) * std::pow(frac, concession);
}

double success_rate(std::span<const bool> successes) {
  if (successes.empty()) throw EmptyCorpus("success_rate over empty corpus");
  std::size_t n = 0;
  for (bool s : successes) n += s ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(successes.size());
}

double avg_rounds(std::span<const bool> successes,
                  std::span<const std::size_t> rounds) {
  if (successes.size() != rounds.size()) {
    throw LengthMismatch("avg_rounds: flag/round length mismatch");
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < successes.size(); ++i) {
    if (successes[i]) {
      sum += static_cast<double>(rounds[i]);
      ++n;
    }
  }
  if (n == 0) throw NoSuccesses("avg_rounds requires at least one success");
  return sum / static_cast<double>(n);
}

}  // namespace negsim
