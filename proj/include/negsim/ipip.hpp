// IPIP-50 self-report harness: administers the 50-item inventory to
// configured agents, scores it with reverse keying, and correlates the
// per-dimension means against the assigned trait levels.
#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "negsim/agents.hpp"
#include "negsim/personality.hpp"
#include "negsim/random.hpp"
#include "negsim/stats.hpp"

namespace negsim {

struct IpipItem {
  int id = 0;  // 1..50
  Dimension dimension = Dimension::OPE;
  bool positive_keyed = true;  // keyed toward the named trait
  std::string statement;
};

// `id<TAB>dimension<TAB>keying<TAB>statement`; validates 50 items with ids
// 1..50 and exactly 10 per dimension.
std::vector<IpipItem> load_ipip_items(const std::string& path);

std::string render_ipip_prompt(const PersonaInstruction& persona,
                               const std::string& statement);

// First standalone digit, which must be 1..5. Strict mode also rejects
// replies containing any other standalone digit.
int parse_likert(const std::string& reply, bool strict = false);

struct LikertResponse {
  int item_id = 0;
  int score = 0;  // 1..5
};

struct IpipResult {
  std::array<double, 5> means{};  // indexed by Dimension
  std::array<std::size_t, 5> answered{};
  bool complete = false;
};

// Reverse-scores negatively keyed items as 6 - score, then averages the ten
// item scores per dimension. Missing items throw in strict mode; otherwise
// the mean covers the answered items and `complete` is cleared.
IpipResult score_ipip(const std::vector<LikertResponse>& responses,
                      const std::vector<IpipItem>& items, bool strict = false);

// Answers one inventory item for an agent with a known profile.
class IpipResponder {
 public:
  virtual ~IpipResponder() = default;
  virtual std::string respond(const PersonalityProfile& profile,
                              const PersonaInstruction& persona,
                              const IpipItem& item) = 0;
};

// Deterministic responder whose per-dimension mean is a strictly increasing
// function of the assigned level: targets 1, 2, 2.5, 3.5, 4, 5 across the
// six levels, hit exactly by alternating floor/ceil answers and undone
// reverse keying. A monotone oracle for the validation harness.
class ScriptedFaithfulResponder : public IpipResponder {
 public:
  std::string respond(const PersonalityProfile& profile,
                      const PersonaInstruction& persona,
                      const IpipItem& item) override;
};

// Renders the test prompt and asks a generation backend.
class BackendIpipResponder : public IpipResponder {
 public:
  explicit BackendIpipResponder(std::shared_ptr<GenerationBackend> backend)
      : backend_(std::move(backend)) {}

  std::string respond(const PersonalityProfile& profile,
                      const PersonaInstruction& persona,
                      const IpipItem& item) override;

 private:
  std::shared_ptr<GenerationBackend> backend_;
};

struct IpipValidation {
  // grid[ipip dimension][assigned dimension]
  std::array<std::array<TraitMetricCell, 5>, 5> grid{};
  std::size_t agents_scored = 0;
  std::size_t agents_failed = 0;
};

// Samples n_agents profiles, administers all 50 items to each through the
// responder, scores them, and fills the 5x5 Spearman grid between assigned
// ordinal levels and IPIP means. Backend failures drop the agent and are
// counted, not fatal. Stars follow the validation table: p < 0.05.
IpipValidation validate_profiles(IpipResponder& responder,
                                 const std::vector<IpipItem>& items,
                                 const AdjectiveTable& adjectives,
                                 std::size_t n_agents,
                                 std::size_t adjectives_per_dimension,
                                 Rng& rng);

}  // namespace negsim
