#include "negsim/scenario.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "negsim/errors.hpp"

namespace negsim {

std::pair<Price, Price> derive_zone(Price buyer_ideal, Price seller_ideal,
                                    double zone_fraction) {
  if (!(buyer_ideal.positive()) || buyer_ideal >= seller_ideal) {
    throw InvalidPriceOrder("require 0 < buyer ideal < seller ideal, got " +
                            buyer_ideal.str() + " vs " + seller_ideal.str());
  }
  if (!(zone_fraction > 0.0) || zone_fraction > 1.0) {
    throw InvalidPriceOrder("zone fraction must be in (0, 1], got " +
                            std::to_string(zone_fraction));
  }
  const std::int64_t low = buyer_ideal.cents();
  const std::int64_t high = seller_ideal.cents();
  const std::int64_t permille = std::llround(zone_fraction * 1000.0);
  const std::int64_t sum = low + high;
  const std::int64_t width = high - low;
  // bound = (1000*sum -/+ permille*width) / 2000, rounded once per endpoint
  auto bound = [&](std::int64_t sign) {
    long double num = 1000.0L * static_cast<long double>(sum) +
                      static_cast<long double>(sign) *
                          static_cast<long double>(permille) *
                          static_cast<long double>(width);
    return std::llround(static_cast<double>(num / 2000.0L));
  };
  return {Price::from_cents(bound(-1)), Price::from_cents(bound(+1))};
}

NegotiationScenario make_scenario(std::string product, std::string description,
                                  std::string category, Price listing,
                                  Price target, double zone_fraction) {
  auto [lo, hi] = derive_zone(target, listing, zone_fraction);
  NegotiationScenario s;
  s.product = std::move(product);
  s.description = std::move(description);
  s.category = std::move(category);
  s.seller_ideal = listing;
  s.buyer_ideal = target;
  s.seller_reservation = lo;
  s.buyer_reservation = hi;
  s.zone_fraction = zone_fraction;
  return s;
}

namespace {

Price price_field(const nlohmann::json& entry, const char* key,
                  std::size_t index) {
  if (!entry.contains(key)) {
    throw ParseError("scenario entry " + std::to_string(index) +
                     ": missing field '" + key + "'");
  }
  const auto& v = entry.at(key);
  if (v.is_number()) return Price::from_double(v.get<double>());
  if (v.is_string()) {
    if (auto p = Price::parse(v.get<std::string>())) return *p;
  }
  throw ParseError("scenario entry " + std::to_string(index) + ": field '" +
                   key + "' is not a price");
}

}  // namespace

std::vector<NegotiationScenario> load_scenarios(const std::string& path,
                                                double zone_fraction) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!doc.is_array()) throw ParseError(path + ": expected a JSON array");

  std::vector<NegotiationScenario> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    if (!entry.is_object()) {
      throw ParseError("scenario entry " + std::to_string(i) +
                       ": expected an object");
    }
    Price listing = price_field(entry, "listing_price", i);
    Price target = price_field(entry, "target_price", i);
    if (!target.positive() || target >= listing) {
      throw InvalidPriceOrder("scenario entry " + std::to_string(i) +
                              ": require listing_price > target_price > 0");
    }
    std::string product = entry.value("product", std::string());
    if (product.empty()) {
      throw ParseError("scenario entry " + std::to_string(i) +
                       ": missing product name");
    }
    out.push_back(make_scenario(product, entry.value("description", ""),
                                entry.value("category", ""), listing, target,
                                zone_fraction));
  }
  return out;
}

}  // namespace negsim
