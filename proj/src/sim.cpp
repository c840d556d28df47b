#include "scorelo/sim.hpp"

#include <algorithm>
#include <cmath>

namespace scorelo {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Linear-interpolation quantile of a sorted sample (the common "type 7" rule).
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

GameOutcome sample_win_loss(const PlayerId& a, const PlayerId& b, double skill_gap,
                            const ModelParams& params, SplitMix64& rng) {
  const double p_a_wins = sigmoid(params.alpha * skill_gap);
  if (rng.bernoulli(p_a_wins)) return WinLoss(a, b);
  return WinLoss(b, a);
}

GameOutcome sample_margin(const PlayerId& a, const PlayerId& b, double skill_gap,
                          const ModelParams& params, SplitMix64& rng) {
  const double lambda_a = std::exp(params.alpha * skill_gap);
  const double lambda_b = std::exp(-params.alpha * skill_gap);
  const std::int64_t points_a = sample_poisson(rng, lambda_a);
  const std::int64_t points_b = sample_poisson(rng, lambda_b);
  return Margin(a, b, points_a, points_b);
}

GameOutcome sample_wdl(const PlayerId& a, const PlayerId& b, double skill_gap,
                       const ModelParams& params, SplitMix64& rng) {
  const double x = params.alpha * skill_gap;
  const double p_a_wins = sigmoid(x - params.delta);
  const double p_draw =
      params.delta > 0.0
          ? std::sinh(params.delta) / (std::cosh(params.delta) + std::cosh(x))
          : 0.0;
  const double u = rng.next_double();
  if (u < p_a_wins) return WinDrawLoss(a, b, WdlResult::AWins);
  if (u < p_a_wins + p_draw) return WinDrawLoss(a, b, WdlResult::Draw);
  return WinDrawLoss(a, b, WdlResult::BWins);
}

// Sequential-choice construction: draw each place proportionally to
// exp(alpha s) among the players not yet placed.
GameOutcome sample_ranking(const std::vector<PlayerId>& participants,
                           const RatingVector& skills, const ModelParams& params,
                           SplitMix64& rng) {
  std::vector<PlayerId> remaining = participants;
  std::vector<PlayerId> placed;
  placed.reserve(participants.size());
  while (remaining.size() > 1) {
    double max_scaled = -HUGE_VAL;
    for (const auto& p : remaining) {
      max_scaled = std::max(max_scaled, params.alpha * skills.at(p));
    }
    std::vector<double> weights(remaining.size());
    double total = 0.0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      weights[i] = std::exp(params.alpha * skills.at(remaining[i]) - max_scaled);
      total += weights[i];
    }
    const double u = rng.next_double() * total;
    double running = 0.0;
    std::size_t chosen = remaining.size() - 1;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      running += weights[i];
      if (u < running) {
        chosen = i;
        break;
      }
    }
    placed.push_back(remaining[chosen]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(chosen));
  }
  placed.push_back(remaining.front());
  return Ranking(std::move(placed));
}

std::vector<PlayerId> pick_participants(const SkillScenario& scenario, std::int64_t game_index,
                                        SplitMix64& rng) {
  const auto& players = scenario.players;
  const std::size_t n = players.size();
  switch (scenario.pairing) {
    case PairingPolicy::UniformRandomPairs: {
      const std::size_t i = rng.below(n);
      std::size_t j = rng.below(n - 1);
      if (j >= i) ++j;
      return {players[i], players[j]};
    }
    case PairingPolicy::RoundRobin: {
      const std::size_t pair_count = n * (n - 1) / 2;
      std::size_t k = static_cast<std::size_t>(game_index) % pair_count;
      for (std::size_t i = 0; i < n - 1; ++i) {
        const std::size_t row = n - 1 - i;
        if (k < row) return {players[i], players[i + 1 + k]};
        k -= row;
      }
      throw validation_error("round-robin index out of range");  // unreachable
    }
    case PairingPolicy::FullFieldRanking: {
      // Partial Fisher-Yates over index slots.
      std::vector<std::size_t> idx(n);
      for (std::size_t i = 0; i < n; ++i) idx[i] = i;
      const auto m = static_cast<std::size_t>(scenario.ranking_field_size);
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + rng.below(n - i);
        std::swap(idx[i], idx[j]);
      }
      std::vector<PlayerId> field;
      field.reserve(m);
      for (std::size_t i = 0; i < m; ++i) field.push_back(players[idx[i]]);
      return field;
    }
  }
  throw validation_error("unknown pairing policy");
}

}  // namespace

double skill_at(const SkillFn& fn, std::int64_t t) {
  return std::visit(
      [t](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantSkill>) {
          return f.level;
        } else if constexpr (std::is_same_v<T, StepChangeSkill>) {
          return t < f.change_time ? f.level_before : f.level_after;
        } else {
          const auto& knots = f.knots;
          if (t <= knots.front().first) return knots.front().second;
          if (t >= knots.back().first) return knots.back().second;
          for (std::size_t i = 1; i < knots.size(); ++i) {
            if (t <= knots[i].first) {
              const double t0 = static_cast<double>(knots[i - 1].first);
              const double t1 = static_cast<double>(knots[i].first);
              const double frac = (static_cast<double>(t) - t0) / (t1 - t0);
              return knots[i - 1].second + frac * (knots[i].second - knots[i - 1].second);
            }
          }
          return knots.back().second;  // unreachable
        }
      },
      fn);
}

std::string to_string(PairingPolicy policy) {
  switch (policy) {
    case PairingPolicy::UniformRandomPairs: return "uniform_random_pairs";
    case PairingPolicy::RoundRobin: return "round_robin";
    case PairingPolicy::FullFieldRanking: return "full_field_ranking";
  }
  throw validation_error("unknown pairing policy");
}

PairingPolicy pairing_policy_from_string(const std::string& name) {
  if (name == "uniform_random_pairs") return PairingPolicy::UniformRandomPairs;
  if (name == "round_robin") return PairingPolicy::RoundRobin;
  if (name == "full_field_ranking") return PairingPolicy::FullFieldRanking;
  throw validation_error("unknown pairing policy '" + name + "'");
}

void SkillScenario::validate() const {
  if (horizon < 1) {
    throw validation_error("scenario horizon must be >= 1");
  }
  if (players.size() < 2) {
    throw validation_error("scenario requires at least 2 players");
  }
  std::set<PlayerId> unique(players.begin(), players.end());
  if (unique.size() != players.size()) {
    throw validation_error("scenario players must be distinct");
  }
  for (const auto& p : players) {
    if (skills.count(p) == 0) {
      throw validation_error("scenario is missing a skill trajectory for '" + p.str() + "'");
    }
  }
  if (skills.size() != players.size()) {
    throw validation_error("scenario has skill trajectories for unknown players");
  }
  for (const auto& [player, fn] : skills) {
    if (const auto* pw = std::get_if<PiecewiseLinearSkill>(&fn)) {
      if (pw->knots.empty()) {
        throw validation_error("piecewise skill for '" + player.str() + "' needs >= 1 knot");
      }
      for (std::size_t i = 1; i < pw->knots.size(); ++i) {
        if (pw->knots[i].first <= pw->knots[i - 1].first) {
          throw validation_error("piecewise skill knots for '" + player.str() +
                                 "' must have strictly increasing times");
        }
      }
    }
  }
  if (pairing == PairingPolicy::FullFieldRanking) {
    if (ranking_field_size < 2 ||
        static_cast<std::size_t>(ranking_field_size) > players.size()) {
      throw validation_error("ranking field size must be in [2, player count]");
    }
    if (model != ModelKind::Ranking && ranking_field_size != 2) {
      throw validation_error("pair models require a field of exactly 2 participants");
    }
  }
  if (model == ModelKind::EloClassic) {
    throw validation_error("elo_classic defines no outcome distribution to simulate from");
  }
}

GameOutcome sample_outcome(ModelKind kind, const std::vector<PlayerId>& participants,
                           const RatingVector& skills, const ModelParams& params,
                           SplitMix64& rng) {
  params.validate();
  const bool pair_model = kind == ModelKind::WinLoss || kind == ModelKind::Margin ||
                          kind == ModelKind::WinDrawLoss;
  if (pair_model && participants.size() != 2) {
    throw validation_error("model '" + to_string(kind) + "' requires exactly 2 participants");
  }
  switch (kind) {
    case ModelKind::WinLoss:
      return sample_win_loss(participants[0], participants[1],
                             skills.at(participants[0]) - skills.at(participants[1]), params,
                             rng);
    case ModelKind::Margin:
      return sample_margin(participants[0], participants[1],
                           skills.at(participants[0]) - skills.at(participants[1]), params,
                           rng);
    case ModelKind::WinDrawLoss:
      return sample_wdl(participants[0], participants[1],
                        skills.at(participants[0]) - skills.at(participants[1]), params, rng);
    case ModelKind::Ranking:
      if (participants.size() < 2) {
        throw validation_error("ranking requires at least 2 participants");
      }
      return sample_ranking(participants, skills, params, rng);
    case ModelKind::EloClassic:
      throw validation_error("elo_classic defines no outcome distribution to sample from");
  }
  throw validation_error("unknown model kind");
}

SimResult run_simulation(const SkillScenario& scenario, const EngineConfig& engine_config,
                         int replications, std::uint64_t seed) {
  scenario.validate();
  if (replications < 1) {
    throw validation_error("replications must be >= 1");
  }
  const std::set<PlayerId> scenario_pool(scenario.players.begin(), scenario.players.end());
  if (engine_config.player_pool != scenario_pool) {
    throw validation_error("engine pool must equal the scenario player set");
  }

  SimResult result;
  result.horizon = scenario.horizon;
  result.seed = seed;
  result.rng_algorithm = kRngAlgorithm;

  // True-skill trajectories are shared by all replications.
  std::vector<RatingVector> skills_by_time;
  skills_by_time.reserve(static_cast<std::size_t>(scenario.horizon));
  for (std::int64_t t = 1; t <= scenario.horizon; ++t) {
    std::map<PlayerId, double> skills;
    for (const auto& p : scenario.players) {
      const double s = skill_at(scenario.skills.at(p), t);
      skills.emplace(p, s);
      result.skills[p].push_back(s);
    }
    skills_by_time.emplace_back(std::move(skills));
  }

  const std::size_t n = scenario.players.size();
  const auto horizon = static_cast<std::size_t>(scenario.horizon);
  // ratings_samples[player index][t-1] holds that rating across replications.
  std::vector<std::vector<std::vector<double>>> ratings_samples(
      n, std::vector<std::vector<double>>(horizon));

  for (int rep = 0; rep < replications; ++rep) {
    SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(rep));
    RatingVector ratings = init_ratings(engine_config);
    RatingHistory history(ratings);
    for (std::int64_t t = 1; t <= scenario.horizon; ++t) {
      const auto participants_t = pick_participants(scenario, t - 1, rng);
      GameOutcome outcome =
          sample_outcome(scenario.model, participants_t, skills_by_time[t - 1],
                         engine_config.params, rng);
      GameRecord record(t, std::move(outcome));
      ratings = step(ratings, record, engine_config);
      std::map<PlayerId, double> updated;
      for (const auto& p : participants_t) updated.emplace(p, ratings.at(p));
      history.append(t, std::move(updated));
      if (rep == 0) result.sample_log.push_back(std::move(record));

      std::size_t player_index = 0;
      for (const auto& [_, rating] : ratings.entries()) {
        ratings_samples[player_index++][static_cast<std::size_t>(t - 1)].push_back(rating);
      }
    }
    result.replications.push_back(std::move(history));
  }

  std::size_t player_index = 0;
  for (const auto& p : scenario_pool) {
    auto& points = result.aggregate[p];
    points.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
      auto& samples = ratings_samples[player_index][t];
      double mean = 0.0;
      for (double v : samples) mean += v;
      mean /= static_cast<double>(samples.size());
      std::sort(samples.begin(), samples.end());
      AggregatePoint point{static_cast<std::int64_t>(t) + 1, mean,
                           quantile_sorted(samples, 0.025), quantile_sorted(samples, 0.975)};
      if (!(point.band_low <= point.mean && point.mean <= point.band_high)) {
        throw validation_error("aggregate band does not bracket the mean");
      }
      points.push_back(point);
    }
    ++player_index;
  }
  return result;
}

std::vector<PlotRow> plot_data(const SimResult& result) {
  std::vector<PlotRow> rows;
  const std::size_t reps = result.replications.size();
  for (std::size_t rep = 0; rep < reps; ++rep) {
    const RatingHistory& history = result.replications[rep];
    std::map<PlayerId, double> current = history.initial().entries();
    for (const auto& step : history.steps()) {
      for (const auto& [player, rating] : step.updated) current[player] = rating;
      for (const auto& [player, rating] : current) {
        rows.push_back(PlotRow{std::to_string(rep), step.time_index, player, rating,
                               std::nullopt, std::nullopt});
      }
    }
  }
  if (reps > 1) {
    for (const auto& [player, points] : result.aggregate) {
      for (const auto& point : points) {
        rows.push_back(PlotRow{"aggregate", point.time, player, point.mean, point.band_low,
                               point.band_high});
      }
    }
  }
  return rows;
}

}  // namespace scorelo
