// Negotiation scenarios: a product, the two parties' ideal prices, and the
// derived private intervals. The agreement zone is a centered sub-interval
// of [buyer_ideal, seller_ideal] whose width is zone_fraction of the whole.
#pragma once

#include <string>
#include <vector>

#include "negsim/price.hpp"

namespace negsim {

struct NegotiationScenario {
  std::string product;
  std::string description;
  std::string category;  // optional; empty when absent

  Price seller_ideal;        // listing price
  Price buyer_ideal;         // target price
  Price seller_reservation;  // derived lower zone bound
  Price buyer_reservation;   // derived upper zone bound
  double zone_fraction = 0.7;
};

// Centered zone: with W = seller_ideal - buyer_ideal and m the midpoint,
// returns (m - f*W/2, m + f*W/2). The fraction is quantized to 1/1000 so the
// bounds are computed with a single integer rounding per endpoint; when
// ideals are whole dollars and the fraction has at most one decimal (the
// bundled defaults), the bounds and the width f*W are exact in cents.
std::pair<Price, Price> derive_zone(Price buyer_ideal, Price seller_ideal,
                                    double zone_fraction);

NegotiationScenario make_scenario(std::string product, std::string description,
                                  std::string category, Price listing,
                                  Price target, double zone_fraction);

// JSON array of {product, description, listing_price, target_price,
// category?}. Entries violating listing > target > 0 are rejected with a
// line-identified error.
std::vector<NegotiationScenario> load_scenarios(const std::string& path,
                                                double zone_fraction = 0.7);

}  // namespace negsim
