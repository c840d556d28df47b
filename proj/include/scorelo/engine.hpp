#pragma once

#include "scorelo/models.hpp"

namespace scorelo {

// The player pool is fixed for the whole replay; games involving players
// outside the pool are rejected. Simultaneous games are not representable:
// time indices must strictly increase, so callers serialize them.
struct EngineConfig {
  ModelKind model = ModelKind::WinLoss;
  ModelParams params{};
  std::set<PlayerId> player_pool;
};

// Every player starts at params.r_init (the classical Elo reference pins 1200).
RatingVector init_ratings(const EngineConfig& config);

// One game: participants move by K times their score, everyone else is
// bit-identical to the input. EloClassic delegates to elo_classic_update.
RatingVector step(const RatingVector& ratings, const GameRecord& record,
                  const EngineConfig& config);

RatingHistory replay(const std::vector<GameRecord>& log, const EngineConfig& config);

}  // namespace scorelo
