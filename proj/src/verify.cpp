#include "scorelo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "scorelo/engine.hpp"
#include "scorelo/sim.hpp"

namespace scorelo {

namespace {

constexpr ModelKind kScoreModels[] = {ModelKind::WinLoss, ModelKind::Margin,
                                      ModelKind::WinDrawLoss, ModelKind::Ranking};

std::vector<ModelKind> selected_models(const VerifyOptions& options) {
  if (options.model) {
    if (*options.model == ModelKind::EloClassic) {
      throw validation_error("elo_classic has no score; pick one of the four score models");
    }
    return {*options.model};
  }
  return {std::begin(kScoreModels), std::end(kScoreModels)};
}

std::size_t ranking_size_for_case(std::size_t case_index) { return 2 + case_index % 5; }

std::vector<PlayerId> case_participants(ModelKind kind, const std::vector<PlayerId>& players,
                                        std::size_t case_index) {
  const std::size_t m = kind == ModelKind::Ranking ? ranking_size_for_case(case_index) : 2;
  return {players.begin(), players.begin() + static_cast<std::ptrdiff_t>(m)};
}

double uniform_in(SplitMix64& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.next_double();
}

}  // namespace

ScoreVector score_under_mutation(Mutation mutation, ModelKind kind, const RatingVector& ratings,
                                 const GameOutcome& outcome, const ModelParams& params) {
  if (mutation == Mutation::FlipWinLossScoreSign && kind == ModelKind::WinLoss) {
    // The classic copy-paste bug: the sign inside the sigmoid argument is
    // flipped. Zero-sum and the score bounds survive it; the expectation and
    // the gradient check must not.
    const auto& win_loss = std::get<WinLoss>(outcome);
    const double diff = ratings.at(win_loss.winner) - ratings.at(win_loss.loser);
    const double grad = params.alpha / (1.0 + std::exp(-params.alpha * diff));
    return ScoreVector({{win_loss.winner, grad}, {win_loss.loser, -grad}});
  }
  return score(kind, ratings, outcome, params);
}

VerifyOptions VerifyOptions::with_case_budget(std::size_t budget) {
  if (budget == 0) {
    throw validation_error("case budget must be >= 1");
  }
  VerifyOptions options;
  options.zero_sum_cases = budget * 10;
  options.expected_score_vectors = std::max<std::size_t>(5, budget / 20);
  options.fd_cases = budget;
  options.translation_cases = budget * 2;
  options.equivalence_logs = std::max<std::size_t>(2, budget / 50);
  options.bounds_cases = budget * 10;
  return options;
}

std::vector<PlayerId> test_players(std::size_t count) {
  std::vector<PlayerId> players;
  players.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    players.emplace_back("p" + std::to_string(i));
  }
  return players;
}

RatingVector random_case_ratings(SplitMix64& rng, ModelKind kind,
                                 const std::vector<PlayerId>& players) {
  const double range = kind == ModelKind::Margin ? 2.0 : 3.0;
  std::map<PlayerId, double> entries;
  for (const auto& p : players) {
    entries.emplace(p, uniform_in(rng, -range, range));
  }
  return RatingVector(std::move(entries));
}

ModelParams random_case_params(SplitMix64& rng, ModelKind kind) {
  ModelParams params;
  params.alpha = kind == ModelKind::Margin ? uniform_in(rng, 0.5, 1.25)
                                           : uniform_in(rng, 0.5, 2.0);
  params.delta = uniform_in(rng, 0.1, 2.0);
  return params;
}

GameOutcome random_outcome(SplitMix64& rng, ModelKind kind,
                           const std::vector<PlayerId>& participants) {
  switch (kind) {
    case ModelKind::WinLoss:
    case ModelKind::EloClassic:
      if (rng.bernoulli(0.5)) return WinLoss(participants[0], participants[1]);
      return WinLoss(participants[1], participants[0]);
    case ModelKind::Margin:
      return Margin(participants[0], participants[1],
                    static_cast<std::int64_t>(rng.below(13)),
                    static_cast<std::int64_t>(rng.below(13)));
    case ModelKind::WinDrawLoss: {
      const auto category = static_cast<WdlResult>(rng.below(3));
      return WinDrawLoss(participants[0], participants[1], category);
    }
    case ModelKind::Ranking: {
      std::vector<PlayerId> order = participants;
      for (std::size_t i = order.size() - 1; i > 0; --i) {
        std::swap(order[i], order[rng.below(i + 1)]);
      }
      return Ranking(std::move(order));
    }
  }
  throw validation_error("unknown model kind");
}

PropertyReport check_zero_sum(const VerifyOptions& options) {
  PropertyReport report{"zero-sum", options.zero_sum_cases, 0.0, 1e-12, false, ""};
  const auto models = selected_models(options);
  const auto players = test_players(6);
  SplitMix64 rng = substream(options.seed, 0x5u);
  for (std::size_t i = 0; i < options.zero_sum_cases; ++i) {
    const ModelKind kind = models[i % models.size()];
    const auto participants = case_participants(kind, players, i);
    const RatingVector ratings = random_case_ratings(rng, kind, players);
    const ModelParams params = random_case_params(rng, kind);
    const GameOutcome outcome = random_outcome(rng, kind, participants);
    const ScoreVector grad =
        score_under_mutation(options.mutation, kind, ratings, outcome, params);
    report.worst_residual = std::max(report.worst_residual, std::abs(grad.sum()));
  }
  report.passed = report.worst_residual <= report.tolerance;
  return report;
}

PropertyReport check_zero_expected_score(const VerifyOptions& options) {
  PropertyReport report{"zero-expected-score", 0, 0.0, 1e-8, false, ""};
  const auto models = selected_models(options);
  const auto players = test_players(6);
  SplitMix64 rng = substream(options.seed, 0x6u);
  for (const ModelKind kind : models) {
    for (std::size_t i = 0; i < options.expected_score_vectors; ++i) {
      const auto participants = case_participants(kind, players, i);
      const RatingVector ratings = random_case_ratings(rng, kind, players);
      const ModelParams params = random_case_params(rng, kind);
      const OutcomeSpace space = enumerate_outcomes(kind, participants, ratings, params);
      std::map<PlayerId, double> expectation;
      for (const auto& p : participants) expectation[p] = 0.0;
      for (const auto& [outcome, probability] : space.outcomes) {
        const ScoreVector grad =
            score_under_mutation(options.mutation, kind, ratings, outcome, params);
        for (const auto& [p, g] : grad.entries()) expectation[p] += probability * g;
      }
      for (const auto& [_, e] : expectation) {
        report.worst_residual = std::max(report.worst_residual, std::abs(e));
      }
      ++report.cases;
    }
  }
  report.passed = report.worst_residual <= report.tolerance;
  return report;
}

PropertyReport check_fd_agreement(const VerifyOptions& options) {
  PropertyReport report{"finite-difference-agreement", 0, 0.0, 1e-6, false, ""};
  const auto models = selected_models(options);
  const auto players = test_players(6);
  SplitMix64 rng = substream(options.seed, 0x7u);
  for (const ModelKind kind : models) {
    for (std::size_t i = 0; i < options.fd_cases; ++i) {
      const auto participants = case_participants(kind, players, i);
      const RatingVector ratings = random_case_ratings(rng, kind, players);
      const ModelParams params = random_case_params(rng, kind);
      const GameOutcome outcome = random_outcome(rng, kind, participants);
      const ScoreVector closed =
          score_under_mutation(options.mutation, kind, ratings, outcome, params);
      const ScoreVector fd = finite_diff_score(kind, ratings, outcome, params, 1e-5);
      for (const auto& p : participants) {
        const double relative = std::abs(fd.value(p) - closed.value(p)) /
                                std::max(1.0, std::abs(closed.value(p)));
        report.worst_residual = std::max(report.worst_residual, relative);
      }
      ++report.cases;
    }
  }

  // Step-halving order: central differences converge quadratically, so the
  // error against the closed form shrinks about 4x per halving.
  const auto pair = test_players(2);
  const RatingVector ratings(
      {{pair[0], 1.0}, {pair[1], 0.0}});
  const ModelParams params{};
  const GameOutcome outcome = WinLoss(pair[0], pair[1]);
  const double closed = score_under_mutation(options.mutation, ModelKind::WinLoss, ratings,
                                             outcome, params)
                            .value(pair[0]);
  const double err_coarse =
      std::abs(finite_diff_score(ModelKind::WinLoss, ratings, outcome, params, 1e-2)
                   .value(pair[0]) -
               closed);
  const double err_fine =
      std::abs(finite_diff_score(ModelKind::WinLoss, ratings, outcome, params, 5e-3)
                   .value(pair[0]) -
               closed);
  const double ratio = err_fine > 0.0 ? err_coarse / err_fine : 0.0;
  const bool order_ok = ratio >= 3.0 && ratio <= 5.0;
  char ratio_text[64];
  std::snprintf(ratio_text, sizeof(ratio_text), "step-halving error ratio %.2f", ratio);
  report.note = ratio_text;
  report.passed = report.worst_residual <= report.tolerance && order_ok;
  return report;
}

PropertyReport check_monotonicity(const VerifyOptions& options) {
  PropertyReport report{"decreasing-score", 0, -HUGE_VAL, 0.0, false,
                        "residual is the largest consecutive increment"};
  const auto models = selected_models(options);
  const auto players = test_players(4);
  const ModelParams params{};  // alpha 1, delta 1

  // Fixed outcome categories per model; for each, sweep one participant's own
  // rating over [-5, 5] in 0.1 steps and require their own score to fall.
  std::vector<std::pair<ModelKind, GameOutcome>> cases;
  const auto add = [&](ModelKind kind, GameOutcome outcome) {
    if (std::find(models.begin(), models.end(), kind) != models.end()) {
      cases.emplace_back(kind, std::move(outcome));
    }
  };
  add(ModelKind::WinLoss, WinLoss(players[0], players[1]));
  add(ModelKind::Margin, Margin(players[0], players[1], 0, 0));
  add(ModelKind::Margin, Margin(players[0], players[1], 3, 1));
  add(ModelKind::Margin, Margin(players[0], players[1], 1, 4));
  add(ModelKind::WinDrawLoss, WinDrawLoss(players[0], players[1], WdlResult::AWins));
  add(ModelKind::WinDrawLoss, WinDrawLoss(players[0], players[1], WdlResult::Draw));
  add(ModelKind::WinDrawLoss, WinDrawLoss(players[0], players[1], WdlResult::BWins));
  add(ModelKind::Ranking, Ranking({players[0], players[1], players[2], players[3]}));

  bool all_decreasing = true;
  for (const auto& [kind, outcome] : cases) {
    const auto sweep_players = participants(outcome);
    std::map<PlayerId, double> base;
    double offset = 0.5;  // spread the fixed ratings a little
    for (const auto& p : sweep_players) {
      base.emplace(p, offset);
      offset -= 0.5;
    }
    for (const auto& swept : sweep_players) {
      double previous = HUGE_VAL;
      for (int g = 0; g <= 100; ++g) {
        const double r = -5.0 + 0.1 * g;
        const RatingVector ratings = RatingVector(base).with(swept, r);
        const double value =
            score_under_mutation(options.mutation, kind, ratings, outcome, params)
                .value(swept);
        if (g > 0) {
          report.worst_residual = std::max(report.worst_residual, value - previous);
          if (value >= previous) all_decreasing = false;
        }
        previous = value;
      }
      ++report.cases;
    }
  }
  report.passed = all_decreasing;
  return report;
}

PropertyReport check_translation_invariance(const VerifyOptions& options) {
  PropertyReport report{"translation-invariance", options.translation_cases, 0.0, 1e-12,
                        false, ""};
  const auto models = selected_models(options);
  const auto players = test_players(6);
  SplitMix64 rng = substream(options.seed, 0x8u);
  for (std::size_t i = 0; i < options.translation_cases; ++i) {
    const ModelKind kind = models[i % models.size()];
    const auto participants = case_participants(kind, players, i);
    const RatingVector ratings = random_case_ratings(rng, kind, players);
    const ModelParams params = random_case_params(rng, kind);
    const GameOutcome outcome = random_outcome(rng, kind, participants);
    const double shift = uniform_in(rng, -5.0, 5.0);
    std::map<PlayerId, double> shifted_entries;
    for (const auto& [p, r] : ratings.entries()) shifted_entries.emplace(p, r + shift);
    const RatingVector shifted(std::move(shifted_entries));

    const double delta_log_lik = std::abs(log_likelihood(kind, ratings, outcome, params) -
                                          log_likelihood(kind, shifted, outcome, params));
    report.worst_residual = std::max(report.worst_residual, delta_log_lik);
    const ScoreVector grad =
        score_under_mutation(options.mutation, kind, ratings, outcome, params);
    const ScoreVector grad_shifted =
        score_under_mutation(options.mutation, kind, shifted, outcome, params);
    for (const auto& p : participants) {
      report.worst_residual = std::max(
          report.worst_residual, std::abs(grad.value(p) - grad_shifted.value(p)));
    }
  }
  report.passed = report.worst_residual <= report.tolerance;
  return report;
}

EloEquivalenceStats elo_equivalence_stats(std::size_t logs, std::size_t games_per_log,
                                          std::size_t players, std::uint64_t seed) {
  if (players < 2) {
    throw validation_error("equivalence replay needs at least 2 players");
  }
  const auto pool_vector = test_players(players);
  const std::set<PlayerId> pool(pool_vector.begin(), pool_vector.end());

  EngineConfig classic;
  classic.model = ModelKind::EloClassic;
  classic.player_pool = pool;

  // With alpha = ln 10 / 400 and K = 16 / alpha, K * score reproduces the
  // classical 16 * (outcome - expected) update term exactly.
  EngineConfig driven;
  driven.model = ModelKind::WinLoss;
  driven.params.alpha = std::log(10.0) / 400.0;
  driven.params.k_factor = 16.0 / driven.params.alpha;
  driven.params.r_init = kEloClassicInitialRating;
  driven.player_pool = pool;

  EloEquivalenceStats stats;
  SplitMix64 rng = substream(seed, 0x9u);
  for (std::size_t log_index = 0; log_index < logs; ++log_index) {
    std::vector<GameRecord> log;
    log.reserve(games_per_log);
    for (std::size_t g = 0; g < games_per_log; ++g) {
      const std::size_t i = rng.below(players);
      std::size_t j = rng.below(players - 1);
      if (j >= i) ++j;
      log.emplace_back(static_cast<std::int64_t>(g),
                       random_outcome(rng, ModelKind::WinLoss,
                                      {pool_vector[i], pool_vector[j]}));
    }
    const RatingHistory history_classic = replay(log, classic);
    const RatingHistory history_driven = replay(log, driven);

    std::map<PlayerId, double> current_classic = history_classic.initial().entries();
    std::map<PlayerId, double> current_driven = history_driven.initial().entries();
    for (std::size_t k = 0; k < log.size(); ++k) {
      for (const auto& [p, r] : history_classic.steps()[k].updated) current_classic[p] = r;
      for (const auto& [p, r] : history_driven.steps()[k].updated) current_driven[p] = r;
      double total = 0.0;
      for (const auto& [p, r] : current_driven) {
        stats.worst_deviation =
            std::max(stats.worst_deviation, std::abs(r - current_classic.at(p)));
        total += r;
      }
      const double mean = total / static_cast<double>(players);
      stats.worst_mean_drift =
          std::max(stats.worst_mean_drift, std::abs(mean - kEloClassicInitialRating));
    }
  }
  return stats;
}

PropertyReport check_elo_equivalence(const VerifyOptions& options) {
  PropertyReport report{"elo-equivalence", options.equivalence_logs, 0.0, 1e-9, false, ""};
  const EloEquivalenceStats stats = elo_equivalence_stats(
      options.equivalence_logs, options.equivalence_games, 10, options.seed);
  report.worst_residual = stats.worst_deviation;
  char drift_text[64];
  std::snprintf(drift_text, sizeof(drift_text), "worst mean drift %.2e",
                stats.worst_mean_drift);
  report.note = drift_text;
  report.passed = stats.worst_deviation <= report.tolerance && stats.worst_mean_drift <= 1e-10;
  return report;
}

std::vector<PropertyReport> run_property_suite(const VerifyOptions& options) {
  return {check_zero_sum(options),
          check_zero_expected_score(options),
          check_fd_agreement(options),
          check_monotonicity(options),
          check_translation_invariance(options),
          check_elo_equivalence(options)};
}

PropertyReport check_score_bounds(const VerifyOptions& options) {
  PropertyReport report{"score-bounds", 0, -HUGE_VAL, 0.0, false,
                        "residual is the largest bound violation"};
  const auto models = selected_models(options);
  const auto players = test_players(6);
  SplitMix64 rng = substream(options.seed, 0xAu);
  bool all_inside = true;

  const auto record = [&](double value, double lower, double upper) {
    // Open interval: violations are >= 0 exactly on the boundary.
    const double violation = std::max(lower - value, value - upper);
    report.worst_residual = std::max(report.worst_residual, violation);
    if (violation >= 0.0) all_inside = false;
  };

  for (const ModelKind kind : models) {
    if (kind == ModelKind::Margin) continue;  // the margin score is unbounded
    for (std::size_t i = 0; i < options.bounds_cases; ++i) {
      const auto participants = case_participants(kind, players, i);
      const RatingVector ratings = random_case_ratings(rng, kind, players);
      const ModelParams params = random_case_params(rng, kind);
      const GameOutcome outcome = random_outcome(rng, kind, participants);
      const ScoreVector grad =
          score_under_mutation(options.mutation, kind, ratings, outcome, params);
      if (kind == ModelKind::WinLoss) {
        const auto& win_loss = std::get<WinLoss>(outcome);
        record(grad.value(win_loss.winner), 0.0, params.alpha);
        record(grad.value(win_loss.loser), -params.alpha, 0.0);
      } else if (kind == ModelKind::WinDrawLoss) {
        const auto& wdl = std::get<WinDrawLoss>(outcome);
        const double value = grad.value(wdl.player_a);
        if (wdl.result == WdlResult::AWins) {
          record(value, 0.0, params.alpha);
        } else if (wdl.result == WdlResult::BWins) {
          record(value, -params.alpha, 0.0);
        } else {
          record(value, -params.alpha, params.alpha);
          const double diff = ratings.at(wdl.player_a) - ratings.at(wdl.player_b);
          if ((diff > 0.0 && value >= 0.0) || (diff < 0.0 && value <= 0.0)) {
            all_inside = false;  // draw score must oppose the rating difference
          }
        }
      } else {
        const auto& ranking = std::get<Ranking>(outcome);
        const double m = static_cast<double>(ranking.size());
        for (std::size_t rank = 1; rank <= ranking.size(); ++rank) {
          const double value = grad.value(ranking.ranked[rank - 1]);
          if (rank < ranking.size()) {
            record(value, params.alpha - params.alpha * static_cast<double>(rank),
                   params.alpha);
          } else {
            record(value, params.alpha - params.alpha * m, 0.0);
          }
        }
      }
      ++report.cases;
    }
  }
  report.passed = all_inside;
  return report;
}

ReversionCheck reversion_check(ModelKind model, double gap, int replications,
                               std::uint64_t seed) {
  ReversionCheck check;
  check.model = model;
  check.gap = gap;
  const ModelParams params{};
  const bool ranking = model == ModelKind::Ranking;
  std::vector<PlayerId> players{PlayerId("A"), PlayerId("B")};
  if (ranking) players.emplace_back("C");
  const PlayerId& offset_player = players.front();
  const std::set<PlayerId> pool(players.begin(), players.end());

  const RatingVector ratings = RatingVector::uniform(pool, params.r_init);
  const RatingVector skills = ratings.with(offset_player, params.r_init + gap);
  check.exact_expected =
      expected_score(model, players, ratings, skills, params).value(offset_player);
  check.sign_ok = gap > 0.0   ? check.exact_expected > 0.0
                  : gap < 0.0 ? check.exact_expected < 0.0
                              : check.exact_expected == 0.0;
  check.predicted_drift = params.k_factor * check.exact_expected;

  if (replications > 0) {
    SkillScenario scenario;
    scenario.players = players;
    for (const auto& p : players) {
      scenario.skills.emplace(p, ConstantSkill{p == offset_player ? params.r_init + gap
                                                                  : params.r_init});
    }
    scenario.pairing =
        ranking ? PairingPolicy::FullFieldRanking : PairingPolicy::UniformRandomPairs;
    scenario.ranking_field_size = static_cast<int>(players.size());
    scenario.horizon = 1;
    scenario.model = model;
    EngineConfig config{model, params, pool};
    const SimResult result = run_simulation(scenario, config, replications, seed);

    double sum = 0.0;
    double sum_squares = 0.0;
    for (const auto& history : result.replications) {
      const RatingVector last = history.final_ratings();
      const double drift = last.at(offset_player) - params.r_init;
      sum += drift;
      sum_squares += drift * drift;
      check.worst_mean_drift =
          std::max(check.worst_mean_drift, std::abs(last.mean() - params.r_init));
    }
    const auto n = static_cast<double>(replications);
    check.sim_drift = sum / n;
    const double variance =
        replications > 1 ? (sum_squares - n * check.sim_drift * check.sim_drift) / (n - 1.0)
                         : 0.0;
    check.sim_sigma = std::sqrt(std::max(0.0, variance) / n);
  }
  return check;
}

}  // namespace scorelo
