#include "negsim/personality.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "negsim/errors.hpp"

namespace negsim {

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::OPE: return "OPE";
    case Dimension::CON: return "CON";
    case Dimension::EXT: return "EXT";
    case Dimension::AGR: return "AGR";
    case Dimension::NEU: return "NEU";
  }
  return "?";
}

std::optional<Dimension> dimension_from_string(std::string_view s) {
  for (Dimension d : kAllDimensions) {
    if (s == to_string(d)) return d;
  }
  return std::nullopt;
}

std::optional<TraitLevel> TraitLevel::from_ordinal(int o) {
  if (o == 0 || o < -3 || o > 3) return std::nullopt;
  TraitLevel lv;
  lv.polarity = o < 0 ? Polarity::negative : Polarity::positive;
  lv.degree = static_cast<Degree>((o < 0 ? -o : o) - 1);
  return lv;
}

std::string TraitLevel::str() const {
  int o = ordinal();
  std::string s = o < 0 ? "-" : "+";
  s += static_cast<char>('0' + (o < 0 ? -o : o));
  return s;
}

std::optional<TraitLevel> TraitLevel::parse(std::string_view s) {
  if (s.size() != 2 || (s[0] != '-' && s[0] != '+')) return std::nullopt;
  if (s[1] < '1' || s[1] > '3') return std::nullopt;
  int mag = s[1] - '0';
  return from_ordinal(s[0] == '-' ? -mag : mag);
}

AdjectiveTable load_adjective_table(const std::string& path,
                                    bool require_full) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open adjective table: " + path);
  AdjectiveTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string dim, neg, pos;
    if (!std::getline(ss, dim, '\t') || !std::getline(ss, neg, '\t') ||
        !std::getline(ss, pos, '\t')) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected dimension<TAB>negative<TAB>positive");
    }
    auto d = dimension_from_string(dim);
    if (!d) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": unknown dimension '" + dim + "'");
    }
    if (neg.empty() || pos.empty() || neg == pos) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": invalid adjective pair");
    }
    table.push_back({*d, neg, pos});
  }
  if (require_full) {
    if (table.size() != 70) {
      throw ParseError(path + ": expected 70 adjective pairs, found " +
                       std::to_string(table.size()));
    }
    for (Dimension d : kAllDimensions) {
      bool any = std::any_of(table.begin(), table.end(),
                             [d](const auto& p) { return p.dimension == d; });
      if (!any) {
        throw ParseError(path + ": dimension " + std::string(to_string(d)) +
                         " has no pairs");
      }
    }
  }
  return table;
}

PersonalityProfile sample_profile(Rng& rng) {
  PersonalityProfile profile;
  for (Dimension d : kAllDimensions) {
    auto v = uniform_below(rng, kTraitLevelCount);
    TraitLevel lv;
    lv.polarity = v < 3 ? Polarity::negative : Polarity::positive;
    lv.degree = static_cast<Degree>(v % 3);
    profile[d] = lv;
  }
  return profile;
}

namespace {

std::string_view modifier_for(Degree degree) {
  switch (degree) {
    case Degree::high: return "very ";
    case Degree::low: return "a bit ";
    case Degree::moderate: return "";
  }
  return "";
}

}  // namespace

std::vector<std::string> select_adjectives(const PersonalityProfile& profile,
                                           const AdjectiveTable& table,
                                           std::size_t n, Rng& rng) {
  if (n < 1) throw InsufficientAdjectives("n must be >= 1");
  std::vector<std::string> out;
  out.reserve(5 * n);
  for (Dimension d : kAllDimensions) {
    std::vector<const AdjectivePair*> pool;
    for (const auto& pair : table) {
      if (pair.dimension == d) pool.push_back(&pair);
    }
    if (pool.size() < n) {
      throw InsufficientAdjectives(
          "dimension " + std::string(to_string(d)) + " has " +
          std::to_string(pool.size()) + " pairs, need " + std::to_string(n));
    }
    const TraitLevel lv = profile[d];
    // Partial Fisher-Yates: first n entries are a without-replacement draw.
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = i + static_cast<std::size_t>(
                              uniform_below(rng, pool.size() - i));
      std::swap(pool[i], pool[j]);
      const std::string& word = lv.polarity == Polarity::positive
                                    ? pool[i]->positive
                                    : pool[i]->negative;
      out.push_back(std::string(modifier_for(lv.degree)) + word);
    }
  }
  shuffle(rng, out);
  return out;
}

std::string render_personality_instruction(
    const std::vector<std::string>& adjectives) {
  if (adjectives.empty()) throw EmptyAdjectiveList("no adjectives to render");
  std::string list;
  for (std::size_t i = 0; i < adjectives.size(); ++i) {
    if (i > 0) list += ", ";
    list += adjectives[i];
  }
  return "You have following personality: " + list +
         ". Reflect your personality in the negotiation process.";
}

}  // namespace negsim
