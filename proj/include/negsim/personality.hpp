// Big Five trait space: five dimensions, each taking one of six levels
// (polarity x degree). Profiles are sampled uniformly; prompt material comes
// from a table of bipolar adjective pairs keyed by dimension.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "negsim/random.hpp"

namespace negsim {

enum class Dimension : std::uint8_t { OPE = 0, CON, EXT, AGR, NEU };

inline constexpr std::array<Dimension, 5> kAllDimensions = {
    Dimension::OPE, Dimension::CON, Dimension::EXT, Dimension::AGR,
    Dimension::NEU};

std::string_view to_string(Dimension d);
std::optional<Dimension> dimension_from_string(std::string_view s);

enum class Polarity : std::uint8_t { negative = 0, positive = 1 };
enum class Degree : std::uint8_t { low = 0, moderate = 1, high = 2 };

// One of the six values of the level set: {-, +} x {low, moderate, high}.
struct TraitLevel {
  Polarity polarity = Polarity::negative;
  Degree degree = Degree::moderate;

  // Ordinal position on the -3..+3 spectrum (0 is unused).
  int ordinal() const {
    int mag = static_cast<int>(degree) + 1;
    return polarity == Polarity::negative ? -mag : mag;
  }
  static std::optional<TraitLevel> from_ordinal(int o);

  std::string str() const;  // "-3".."-1", "+1".."+3"
  static std::optional<TraitLevel> parse(std::string_view s);

  bool operator==(const TraitLevel&) const = default;
};

inline constexpr std::size_t kTraitLevelCount = 6;

// Total function Dimension -> TraitLevel.
struct PersonalityProfile {
  std::array<TraitLevel, 5> levels{};

  TraitLevel& operator[](Dimension d) { return levels[static_cast<int>(d)]; }
  const TraitLevel& operator[](Dimension d) const {
    return levels[static_cast<int>(d)];
  }
  bool operator==(const PersonalityProfile&) const = default;
};

struct AdjectivePair {
  Dimension dimension;
  std::string negative;
  std::string positive;
};

using AdjectiveTable = std::vector<AdjectivePair>;

// The bundled table carries the full set of 70 bipolar pairs; pass
// require_full=false to load ad-hoc tables in tests.
AdjectiveTable load_adjective_table(const std::string& path,
                                    bool require_full = true);

struct PersonaInstruction {
  std::vector<std::string> adjectives;  // modifier-prefixed, shuffled order
  std::string rendered;
};

// Each of the five dimensions drawn independently and uniformly from the six
// levels. Same engine state => same profile.
PersonalityProfile sample_profile(Rng& rng);

// n adjectives per dimension, drawn without replacement from the pairs of
// that dimension on the side matching the profile's polarity. Degree maps to
// a modifier prefix: high -> "very ", low -> "a bit ", moderate -> none.
// The combined 5n strings are shuffled before being returned.
std::vector<std::string> select_adjectives(const PersonalityProfile& profile,
                                           const AdjectiveTable& table,
                                           std::size_t n, Rng& rng);

std::string render_personality_instruction(
    const std::vector<std::string>& adjectives);

inline PersonaInstruction make_persona(const PersonalityProfile& profile,
                                       const AdjectiveTable& table,
                                       std::size_t n, Rng& rng) {
  PersonaInstruction out;
  out.adjectives = select_adjectives(profile, table, n, rng);
  out.rendered = render_personality_instruction(out.adjectives);
  return out;
}

}  // namespace negsim
