#include "negsim/ipip.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "negsim/errors.hpp"

namespace negsim {

std::vector<IpipItem> load_ipip_items(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open IPIP items file: " + path);
  std::vector<IpipItem> items;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id_s, dim_s, key_s, statement;
    if (!std::getline(ss, id_s, '\t') || !std::getline(ss, dim_s, '\t') ||
        !std::getline(ss, key_s, '\t') || !std::getline(ss, statement)) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected id<TAB>dimension<TAB>keying<TAB>statement");
    }
    IpipItem item;
    try {
      item.id = std::stoi(id_s);
    } catch (...) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad item id");
    }
    const auto dim = dimension_from_string(dim_s);
    if (!dim) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": unknown dimension '" + dim_s + "'");
    }
    item.dimension = *dim;
    if (key_s == "positive") {
      item.positive_keyed = true;
    } else if (key_s == "negative") {
      item.positive_keyed = false;
    } else {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": keying must be positive or negative");
    }
    if (statement.empty()) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": empty statement");
    }
    item.statement = statement;
    items.push_back(std::move(item));
  }
  if (items.size() != 50) {
    throw ParseError(path + ": expected 50 items, found " +
                     std::to_string(items.size()));
  }
  std::array<std::size_t, 5> per_dim{};
  std::array<bool, 51> seen{};
  for (const IpipItem& item : items) {
    if (item.id < 1 || item.id > 50 || seen[item.id]) {
      throw ParseError(path + ": item ids must be unique in 1..50");
    }
    seen[item.id] = true;
    per_dim[static_cast<std::size_t>(item.dimension)] += 1;
  }
  for (Dimension d : kAllDimensions) {
    if (per_dim[static_cast<std::size_t>(d)] != 10) {
      throw ParseError(path + ": dimension " + std::string(to_string(d)) +
                       " must have exactly 10 items");
    }
  }
  return items;
}

std::string render_ipip_prompt(const PersonaInstruction& persona,
                               const std::string& statement) {
  std::string adjectives;
  for (std::size_t i = 0; i < persona.adjectives.size(); ++i) {
    if (i > 0) adjectives += ", ";
    adjectives += persona.adjectives[i];
  }
  return "Act as person with following personality: \n" + adjectives +
         "\nEvaluate the following statement:\n" + statement +
         ".\n\nPlease rate how accurately this describes you on a scale from "
         "1 to 5 (where 1 = \"very inaccurate\", 2 = \"moderately "
         "inaccurate\", 3 = \"neither accurate nor inaccurate\", 4 = "
         "\"moderately accurate\", and 5 = \"very accurate\"). Please answer "
         "using EXACTLY one of the following:  1, 2, 3, 4, or 5.";
}

int parse_likert(const std::string& reply, bool strict) {
  auto standalone = [&](std::size_t i) {
    const bool left_ok =
        i == 0 || !std::isalnum(static_cast<unsigned char>(reply[i - 1]));
    const bool right_ok =
        i + 1 >= reply.size() ||
        !std::isalnum(static_cast<unsigned char>(reply[i + 1]));
    return left_ok && right_ok;
  };
  std::optional<int> first;
  std::size_t digit_count = 0;
  for (std::size_t i = 0; i < reply.size(); ++i) {
    if (reply[i] < '0' || reply[i] > '9') continue;
    if (!standalone(i)) continue;
    ++digit_count;
    if (!first) first = reply[i] - '0';
  }
  if (!first) throw UnparseableReply("no standalone digit in reply");
  if (*first < 1 || *first > 5) {
    throw UnparseableReply("digit out of the 1..5 scale: " +
                           std::to_string(*first));
  }
  if (strict && digit_count > 1) {
    throw UnparseableReply("strict mode: reply contains extra digits");
  }
  return *first;
}

IpipResult score_ipip(const std::vector<LikertResponse>& responses,
                      const std::vector<IpipItem>& items, bool strict) {
  std::array<std::optional<int>, 51> by_id{};
  for (const LikertResponse& r : responses) {
    if (r.item_id < 1 || r.item_id > 50) {
      throw UnparseableReply("response references unknown item id " +
                             std::to_string(r.item_id));
    }
    if (r.score < 1 || r.score > 5) {
      throw UnparseableReply("score out of range for item " +
                             std::to_string(r.item_id));
    }
    by_id[r.item_id] = r.score;
  }

  IpipResult result;
  std::array<double, 5> sums{};
  for (const IpipItem& item : items) {
    const auto score = by_id[item.id];
    if (!score) {
      if (strict) {
        throw MissingItems("missing response for item " +
                           std::to_string(item.id));
      }
      continue;
    }
    const int keyed = item.positive_keyed ? *score : 6 - *score;
    const std::size_t d = static_cast<std::size_t>(item.dimension);
    sums[d] += keyed;
    result.answered[d] += 1;
  }
  result.complete = true;
  for (std::size_t d = 0; d < 5; ++d) {
    if (result.answered[d] == 0) {
      result.complete = false;
      result.means[d] = 0.0;
      continue;
    }
    if (result.answered[d] != 10) result.complete = false;
    result.means[d] = sums[d] / static_cast<double>(result.answered[d]);
  }
  return result;
}

std::string ScriptedFaithfulResponder::respond(
    const PersonalityProfile& profile, const PersonaInstruction&,
    const IpipItem& item) {
  static constexpr std::array<double, 6> kTargets = {1.0, 2.0, 2.5,
                                                     3.5, 4.0, 5.0};
  const TraitLevel level = profile[item.dimension];
  const int idx = level.ordinal() < 0 ? level.ordinal() + 3
                                      : level.ordinal() + 2;  // 0..5
  const double target = kTargets[static_cast<std::size_t>(idx)];
  const int lo = static_cast<int>(target);
  const int hi = lo < target ? lo + 1 : lo;
  // Alternate by item id so the ten-item mean lands exactly on the target.
  const int keyed = item.id % 2 == 0 ? hi : lo;
  const int answer = item.positive_keyed ? keyed : 6 - keyed;
  return std::to_string(answer);
}

std::string BackendIpipResponder::respond(const PersonalityProfile&,
                                          const PersonaInstruction& persona,
                                          const IpipItem& item) {
  const std::string prompt = render_ipip_prompt(persona, item.statement);
  return backend_->generate(prompt, {}, Role::buyer);
}

IpipValidation validate_profiles(IpipResponder& responder,
                                 const std::vector<IpipItem>& items,
                                 const AdjectiveTable& adjectives,
                                 std::size_t n_agents,
                                 std::size_t adjectives_per_dimension,
                                 Rng& rng) {
  if (n_agents < 3) {
    throw Error("validate_profiles requires at least 3 agents");
  }
  std::vector<PersonalityProfile> profiles;
  std::vector<IpipResult> results;
  IpipValidation validation;
  for (std::size_t a = 0; a < n_agents; ++a) {
    const PersonalityProfile profile = sample_profile(rng);
    const PersonaInstruction persona =
        make_persona(profile, adjectives, adjectives_per_dimension, rng);
    std::vector<LikertResponse> responses;
    bool failed = false;
    for (const IpipItem& item : items) {
      try {
        const std::string reply = responder.respond(profile, persona, item);
        responses.push_back({item.id, parse_likert(reply)});
      } catch (const UnparseableReply&) {
        // item marked missing; the dimension mean covers the answered items
      } catch (const Error&) {
        failed = true;
        break;
      }
    }
    if (failed) {
      validation.agents_failed += 1;
      continue;
    }
    profiles.push_back(profile);
    results.push_back(score_ipip(responses, items));
  }
  validation.agents_scored = profiles.size();
  if (profiles.size() < 3) {
    throw Error("too few scored agents for the correlation grid");
  }

  for (std::size_t row = 0; row < 5; ++row) {      // IPIP dimension
    for (std::size_t col = 0; col < 5; ++col) {    // assigned dimension
      std::vector<double> assigned, measured;
      assigned.reserve(profiles.size());
      measured.reserve(profiles.size());
      for (std::size_t a = 0; a < profiles.size(); ++a) {
        assigned.push_back(static_cast<double>(
            profiles[a][kAllDimensions[col]].ordinal()));
        measured.push_back(results[a].means[row]);
      }
      TraitMetricCell cell;
      try {
        const RankCorrelation rc = spearman(assigned, measured);
        cell.rho = rc.rho;
        cell.p_value = rc.p_value;
        cell.n = rc.n;
        cell.stars = rc.p_value < 0.05 ? 1 : 0;
        cell.defined = true;
      } catch (const ConstantSeries&) {
        cell.defined = false;
      }
      validation.grid[row][col] = cell;
    }
  }
  return validation;
}

}  // namespace negsim
