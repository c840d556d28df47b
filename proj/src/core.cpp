#include "scorelo/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

namespace scorelo {

namespace {

bool valid_id_char(char c) {
  if (std::isspace(static_cast<unsigned char>(c))) return false;
  return c != ',' && c != '>' && c != '#';
}

void require_distinct(const PlayerId& a, const PlayerId& b) {
  if (a == b) {
    throw validation_error("two-player outcome requires distinct players, got '" +
                           a.str() + "' twice");
  }
}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw validation_error(std::string(what) + " must be finite");
  }
}

}  // namespace

PlayerId::PlayerId(std::string id) : id_(std::move(id)) {
  if (id_.empty()) {
    throw validation_error("player id must be non-empty");
  }
  if (!std::all_of(id_.begin(), id_.end(), valid_id_char)) {
    throw validation_error("player id '" + id_ +
                           "' contains whitespace or a reserved character (',' '>' '#')");
  }
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::WinLoss: return "win_loss";
    case ModelKind::Margin: return "margin";
    case ModelKind::WinDrawLoss: return "win_draw_loss";
    case ModelKind::Ranking: return "ranking";
    case ModelKind::EloClassic: return "elo_classic";
  }
  throw validation_error("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "win_loss") return ModelKind::WinLoss;
  if (name == "margin") return ModelKind::Margin;
  if (name == "win_draw_loss") return ModelKind::WinDrawLoss;
  if (name == "ranking") return ModelKind::Ranking;
  if (name == "elo_classic") return ModelKind::EloClassic;
  throw validation_error("unknown model '" + name +
                         "' (expected win_loss, margin, win_draw_loss, ranking or elo_classic)");
}

void ModelParams::validate() const {
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw validation_error("alpha must be finite and > 0");
  }
  if (!std::isfinite(delta) || delta < 0.0) {
    throw validation_error("delta must be finite and >= 0");
  }
  if (!std::isfinite(k_factor) || k_factor <= 0.0) {
    throw validation_error("k_factor must be finite and > 0");
  }
  if (!std::isfinite(r_init)) {
    throw validation_error("r_init must be finite");
  }
}

WinLoss::WinLoss(PlayerId winner_in, PlayerId loser_in)
    : winner(std::move(winner_in)), loser(std::move(loser_in)) {
  require_distinct(winner, loser);
}

Margin::Margin(PlayerId player_a_in, PlayerId player_b_in, std::int64_t points_a_in,
               std::int64_t points_b_in)
    : player_a(std::move(player_a_in)),
      player_b(std::move(player_b_in)),
      points_a(points_a_in),
      points_b(points_b_in) {
  require_distinct(player_a, player_b);
  if (points_a < 0 || points_b < 0) {
    throw validation_error("points must be non-negative");
  }
}

WinDrawLoss::WinDrawLoss(PlayerId player_a_in, PlayerId player_b_in, WdlResult result_in)
    : player_a(std::move(player_a_in)), player_b(std::move(player_b_in)), result(result_in) {
  require_distinct(player_a, player_b);
}

Ranking::Ranking(std::vector<PlayerId> ranked_in) : ranked(std::move(ranked_in)) {
  if (ranked.size() < 2) {
    throw validation_error("ranking requires at least 2 players");
  }
  std::set<PlayerId> seen;
  for (const auto& p : ranked) {
    if (!seen.insert(p).second) {
      throw validation_error("ranking contains player '" + p.str() + "' more than once");
    }
  }
}

std::size_t Ranking::rank_of(const PlayerId& player) const {
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i] == player) return i + 1;
  }
  throw validation_error("player '" + player.str() + "' is not in the ranking");
}

std::vector<PlayerId> participants(const GameOutcome& outcome) {
  return std::visit(
      [](const auto& o) -> std::vector<PlayerId> {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, WinLoss>) {
          return {o.winner, o.loser};
        } else if constexpr (std::is_same_v<T, Margin>) {
          return {o.player_a, o.player_b};
        } else if constexpr (std::is_same_v<T, WinDrawLoss>) {
          return {o.player_a, o.player_b};
        } else {
          return o.ranked;
        }
      },
      outcome);
}

GameRecord::GameRecord(std::int64_t time_index_in, GameOutcome outcome_in)
    : time_index(time_index_in), outcome(std::move(outcome_in)) {
  if (time_index < 0) {
    throw validation_error("time index must be non-negative");
  }
}

RatingVector::RatingVector(std::map<PlayerId, double> entries) : entries_(std::move(entries)) {
  for (const auto& [player, rating] : entries_) {
    if (!std::isfinite(rating)) {
      throw validation_error("rating for '" + player.str() + "' must be finite");
    }
  }
}

RatingVector RatingVector::uniform(const std::set<PlayerId>& pool, double value) {
  require_finite(value, "rating");
  std::map<PlayerId, double> entries;
  for (const auto& p : pool) entries.emplace(p, value);
  return RatingVector(std::move(entries));
}

double RatingVector::at(const PlayerId& player) const {
  auto it = entries_.find(player);
  if (it == entries_.end()) {
    throw validation_error("unknown player '" + player.str() + "'");
  }
  return it->second;
}

bool RatingVector::contains(const PlayerId& player) const {
  return entries_.count(player) != 0;
}

RatingVector RatingVector::with(const PlayerId& player, double value) const {
  require_finite(value, "rating");
  RatingVector copy = *this;
  copy.entries_[player] = value;
  return copy;
}

double RatingVector::sum() const {
  double total = 0.0;
  for (const auto& [_, r] : entries_) total += r;
  return total;
}

double RatingVector::mean() const {
  if (entries_.empty()) {
    throw validation_error("mean of an empty rating vector");
  }
  return sum() / static_cast<double>(entries_.size());
}

RatingHistory::RatingHistory(RatingVector initial) : initial_(std::move(initial)) {
  if (initial_.empty()) {
    throw validation_error("rating history requires a non-empty initial vector");
  }
}

void RatingHistory::append(std::int64_t time_index, std::map<PlayerId, double> updated) {
  if (!steps_.empty() && time_index <= steps_.back().time_index) {
    throw log_order_error("time index " + std::to_string(time_index) +
                          " does not increase past " +
                          std::to_string(steps_.back().time_index));
  }
  if (time_index < 0) {
    throw validation_error("time index must be non-negative");
  }
  for (const auto& [player, rating] : updated) {
    if (!initial_.contains(player)) {
      throw validation_error("history update for unknown player '" + player.str() + "'");
    }
    if (!std::isfinite(rating)) {
      throw validation_error("history update for '" + player.str() + "' must be finite");
    }
  }
  steps_.push_back(Step{time_index, std::move(updated)});
}

RatingVector RatingHistory::after_step(std::size_t count) const {
  if (count > steps_.size()) {
    throw validation_error("history has only " + std::to_string(steps_.size()) + " steps");
  }
  std::map<PlayerId, double> entries = initial_.entries();
  for (std::size_t i = 0; i < count; ++i) {
    for (const auto& [player, rating] : steps_[i].updated) {
      entries[player] = rating;
    }
  }
  return RatingVector(std::move(entries));
}

std::map<PlayerId, std::int64_t> RatingHistory::games_played() const {
  std::map<PlayerId, std::int64_t> counts;
  for (const auto& [player, _] : initial_.entries()) counts[player] = 0;
  for (const auto& step : steps_) {
    for (const auto& [player, _] : step.updated) ++counts[player];
  }
  return counts;
}

}  // namespace scorelo
