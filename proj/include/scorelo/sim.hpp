#pragma once

#include <optional>

#include "scorelo/engine.hpp"
#include "scorelo/rng.hpp"

namespace scorelo {

// --- True-skill trajectories --------------------------------------------------

struct ConstantSkill {
  double level;
};

struct StepChangeSkill {
  double level_before;
  double level_after;
  std::int64_t change_time;  // first time index at which level_after applies
};

struct PiecewiseLinearSkill {
  std::vector<std::pair<std::int64_t, double>> knots;  // strictly increasing times
};

using SkillFn = std::variant<ConstantSkill, StepChangeSkill, PiecewiseLinearSkill>;

double skill_at(const SkillFn& fn, std::int64_t t);

// --- Scenario -----------------------------------------------------------------

enum class PairingPolicy { UniformRandomPairs, RoundRobin, FullFieldRanking };

std::string to_string(PairingPolicy policy);
PairingPolicy pairing_policy_from_string(const std::string& name);

/// Drives the generator side of a simulation: true skills over time, how
/// players are matched, and which outcome model produces results.
struct SkillScenario {
  std::vector<PlayerId> players;
  std::map<PlayerId, SkillFn> skills;
  PairingPolicy pairing = PairingPolicy::UniformRandomPairs;
  int ranking_field_size = 2;  // participants per game under FullFieldRanking
  std::int64_t horizon = 1;    // number of games, time indices 1..horizon
  ModelKind model = ModelKind::WinLoss;

  void validate() const;
};

// --- Results ------------------------------------------------------------------

struct AggregatePoint {
  std::int64_t time;
  double mean;
  double band_low;   // 2.5th percentile across replications
  double band_high;  // 97.5th percentile
};

struct SimResult {
  std::vector<RatingHistory> replications;
  std::map<PlayerId, std::vector<double>> skills;  // s_t for t = 1..horizon
  std::map<PlayerId, std::vector<AggregatePoint>> aggregate;
  std::vector<GameRecord> sample_log;  // the games of replication 0
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  std::string rng_algorithm;
};

// One outcome drawn from the exact model distribution at the given (true)
// skills. Participant count must fit the model: two for the pair models, at
// least two for ranking.
GameOutcome sample_outcome(ModelKind kind, const std::vector<PlayerId>& participants,
                           const RatingVector& skills, const ModelParams& params,
                           SplitMix64& rng);

// Replication k consumes substream(seed, k), so results are reproducible from
// the seed alone and replications are independent.
SimResult run_simulation(const SkillScenario& scenario, const EngineConfig& engine_config,
                         int replications, std::uint64_t seed);

// --- Plot data ----------------------------------------------------------------

/// One row of the long-format plot table. Per-replication rows have empty
/// bands; aggregate rows (replication == "aggregate") carry them.
struct PlotRow {
  std::string replication;
  std::int64_t time;
  PlayerId player;
  double rating;
  std::optional<double> band_low;
  std::optional<double> band_high;

  bool operator==(const PlotRow&) const = default;
};

std::vector<PlotRow> plot_data(const SimResult& result);

}  // namespace scorelo
