#include "scorelo/engine.hpp"

namespace scorelo {

RatingVector init_ratings(const EngineConfig& config) {
  if (config.player_pool.empty()) {
    throw validation_error("player pool must be non-empty");
  }
  config.params.validate();
  const double start = config.model == ModelKind::EloClassic ? kEloClassicInitialRating
                                                             : config.params.r_init;
  return RatingVector::uniform(config.player_pool, start);
}

RatingVector step(const RatingVector& ratings, const GameRecord& record,
                  const EngineConfig& config) {
  for (const auto& player : participants(record.outcome)) {
    if (config.player_pool.count(player) == 0) {
      throw validation_error("player '" + player.str() + "' is not in the pool");
    }
  }
  if (config.model == ModelKind::EloClassic) {
    if (!outcome_matches(config.model, record.outcome)) {
      throw model_mismatch_error("elo_classic consumes win_loss outcomes only");
    }
    return elo_classic_update(ratings, std::get<WinLoss>(record.outcome));
  }
  const ScoreVector grad = score(config.model, ratings, record.outcome, config.params);
  RatingVector updated = ratings;
  for (const auto& [player, g] : grad.entries()) {
    updated = updated.with(player, updated.at(player) + config.params.k_factor * g);
  }
  return updated;
}

RatingHistory replay(const std::vector<GameRecord>& log, const EngineConfig& config) {
  RatingVector ratings = init_ratings(config);
  RatingHistory history(ratings);
  std::int64_t previous_time = -1;
  for (const auto& record : log) {
    if (record.time_index <= previous_time) {
      throw log_order_error("time index " + std::to_string(record.time_index) +
                            " does not increase past " + std::to_string(previous_time));
    }
    previous_time = record.time_index;
    ratings = step(ratings, record, config);
    std::map<PlayerId, double> updated;
    for (const auto& player : participants(record.outcome)) {
      updated.emplace(player, ratings.at(player));
    }
    history.append(record.time_index, std::move(updated));
  }
  return history;
}

}  // namespace scorelo
