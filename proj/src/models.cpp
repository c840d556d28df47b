#include "scorelo/models.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

namespace scorelo {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 / (1 + exp(-x))) without overflow on either tail.
double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// ln I_k(2) for integer k >= 0, via the series sum_m 1/(m! (m+k)!) scaled by
// its leading term 1/k!: every scaled term is <= 1, so no underflow for any k.
// At argument 2 the terms decay factorially; ~20 iterations reach 1e-18.
double log_bessel_i2(std::int64_t k) {
  const double log_lead = -std::lgamma(static_cast<double>(k) + 1.0);
  double term = 1.0;
  double sum = 1.0;
  for (std::int64_t m = 1; m < 200; ++m) {
    term /= static_cast<double>(m) * static_cast<double>(k + m);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return log_lead + std::log(sum);
}

double rating_difference(const RatingVector& ratings, const PlayerId& a, const PlayerId& b) {
  return ratings.at(a) - ratings.at(b);
}

ScoreVector pair_score(const PlayerId& a, const PlayerId& b, double grad_a) {
  return ScoreVector({{a, grad_a}, {b, -grad_a}});
}

}  // namespace

ScoreVector::ScoreVector(std::map<PlayerId, double> entries) : entries_(std::move(entries)) {
  for (const auto& [player, g] : entries_) {
    if (!std::isfinite(g)) {
      throw validation_error("score for '" + player.str() + "' must be finite");
    }
  }
}

double ScoreVector::value(const PlayerId& player) const {
  auto it = entries_.find(player);
  return it == entries_.end() ? 0.0 : it->second;
}

double ScoreVector::sum() const {
  double total = 0.0;
  for (const auto& [_, g] : entries_) total += g;
  return total;
}

ScoreVector ScoreVector::scaled(double factor) const {
  std::map<PlayerId, double> scaled_entries;
  for (const auto& [player, g] : entries_) scaled_entries.emplace(player, factor * g);
  return ScoreVector(std::move(scaled_entries));
}

double win_loss_log_likelihood(const RatingVector& ratings, const WinLoss& outcome,
                               const ModelParams& params) {
  params.validate();
  const double diff = rating_difference(ratings, outcome.winner, outcome.loser);
  return log_sigmoid(params.alpha * diff);
}

ScoreVector win_loss_score(const RatingVector& ratings, const WinLoss& outcome,
                           const ModelParams& params) {
  params.validate();
  const double diff = rating_difference(ratings, outcome.winner, outcome.loser);
  const double grad_winner = params.alpha * sigmoid(-params.alpha * diff);
  return pair_score(outcome.winner, outcome.loser, grad_winner);
}

double margin_log_likelihood(const RatingVector& ratings, const Margin& outcome,
                             const ModelParams& params) {
  params.validate();
  const double x = params.alpha * rating_difference(ratings, outcome.player_a, outcome.player_b);
  const std::int64_t d = outcome.difference();
  return x * static_cast<double>(d) - 2.0 * std::cosh(x) + log_bessel_i2(std::llabs(d));
}

ScoreVector margin_score(const RatingVector& ratings, const Margin& outcome,
                         const ModelParams& params) {
  params.validate();
  const double x = params.alpha * rating_difference(ratings, outcome.player_a, outcome.player_b);
  const double grad_a =
      params.alpha * (static_cast<double>(outcome.difference()) - 2.0 * std::sinh(x));
  return pair_score(outcome.player_a, outcome.player_b, grad_a);
}

double wdl_log_likelihood(const RatingVector& ratings, const WinDrawLoss& outcome,
                          const ModelParams& params) {
  params.validate();
  const double x = params.alpha * rating_difference(ratings, outcome.player_a, outcome.player_b);
  switch (outcome.result) {
    case WdlResult::AWins:
      return log_sigmoid(x - params.delta);
    case WdlResult::BWins:
      return log_sigmoid(-x - params.delta);
    case WdlResult::Draw: {
      if (params.delta == 0.0) {
        throw degenerate_likelihood_error(
            "draw observed under delta = 0, which assigns it probability zero");
      }
      // The difference of sigmoids is even in x. Evaluating at |x| keeps both
      // terms on their small, exactly-representable tails; at -|x| they both
      // round to 1 once |x| > ~37 and the difference collapses to zero.
      const double ax = std::abs(x);
      const double p = sigmoid(params.delta - ax) - sigmoid(-params.delta - ax);
      if (p <= 0.0) {
        throw degenerate_likelihood_error("draw probability underflowed to zero");
      }
      return std::log(p);
    }
  }
  throw validation_error("unknown win/draw/loss result");
}

ScoreVector wdl_score(const RatingVector& ratings, const WinDrawLoss& outcome,
                      const ModelParams& params) {
  params.validate();
  const double x = params.alpha * rating_difference(ratings, outcome.player_a, outcome.player_b);
  double grad_a = 0.0;
  switch (outcome.result) {
    case WdlResult::AWins:
      grad_a = params.alpha * sigmoid(params.delta - x);
      break;
    case WdlResult::BWins:
      grad_a = -params.alpha * sigmoid(params.delta + x);
      break;
    case WdlResult::Draw: {
      if (params.delta == 0.0) {
        throw degenerate_likelihood_error(
            "draw observed under delta = 0, which assigns it probability zero");
      }
      // sinh(x) / (cosh(delta) + cosh(x)) with numerator and denominator
      // scaled by e^-|x|, so neither overflows however lopsided the ratings.
      const double ax = std::abs(x);
      const double decay = std::exp(-2.0 * ax);
      const double ratio = (1.0 - decay) /
                           (2.0 * std::cosh(params.delta) * std::exp(-ax) + 1.0 + decay);
      grad_a = -params.alpha * (x < 0.0 ? -ratio : ratio);
      break;
    }
  }
  return pair_score(outcome.player_a, outcome.player_b, grad_a);
}

double ranking_log_likelihood(const RatingVector& ratings, const Ranking& outcome,
                              const ModelParams& params) {
  params.validate();
  const std::size_t m = outcome.size();
  std::vector<double> scaled(m);
  for (std::size_t p = 0; p < m; ++p) {
    scaled[p] = params.alpha * ratings.at(outcome.ranked[p]);
  }
  // suffix_lse[p] = ln sum_{q >= p} exp(scaled[q])
  std::vector<double> suffix_lse(m);
  suffix_lse[m - 1] = scaled[m - 1];
  for (std::size_t p = m - 1; p-- > 0;) {
    suffix_lse[p] = log_add_exp(scaled[p], suffix_lse[p + 1]);
  }
  double log_lik = 0.0;
  for (std::size_t p = 0; p < m; ++p) {
    log_lik += scaled[p] - suffix_lse[p];
  }
  return log_lik;
}

ScoreVector ranking_score(const RatingVector& ratings, const Ranking& outcome,
                          const ModelParams& params) {
  params.validate();
  const std::size_t m = outcome.size();
  std::vector<double> scaled(m);
  for (std::size_t p = 0; p < m; ++p) {
    scaled[p] = params.alpha * ratings.at(outcome.ranked[p]);
  }
  std::vector<double> suffix_lse(m);
  suffix_lse[m - 1] = scaled[m - 1];
  for (std::size_t p = m - 1; p-- > 0;) {
    suffix_lse[p] = log_add_exp(scaled[p], suffix_lse[p + 1]);
  }
  std::map<PlayerId, double> grads;
  for (std::size_t i = 0; i < m; ++i) {
    double softmax_mass = 0.0;
    for (std::size_t p = 0; p <= i; ++p) {
      softmax_mass += std::exp(scaled[i] - suffix_lse[p]);
    }
    grads.emplace(outcome.ranked[i], params.alpha * (1.0 - softmax_mass));
  }
  return ScoreVector(std::move(grads));
}

RatingVector elo_classic_update(const RatingVector& ratings, const WinLoss& outcome) {
  const double r_winner = ratings.at(outcome.winner);
  const double r_loser = ratings.at(outcome.loser);
  const double expected_winner =
      1.0 / (1.0 + std::pow(kEloClassicBase, -(r_winner - r_loser) / kEloClassicScale));
  const double expected_loser =
      1.0 / (1.0 + std::pow(kEloClassicBase, (r_winner - r_loser) / kEloClassicScale));
  return ratings.with(outcome.winner, r_winner + kEloClassicKFactor * (1.0 - expected_winner))
      .with(outcome.loser, r_loser + kEloClassicKFactor * (0.0 - expected_loser));
}

bool outcome_matches(ModelKind kind, const GameOutcome& outcome) {
  switch (kind) {
    case ModelKind::WinLoss:
    case ModelKind::EloClassic:
      return std::holds_alternative<WinLoss>(outcome);
    case ModelKind::Margin:
      return std::holds_alternative<Margin>(outcome);
    case ModelKind::WinDrawLoss:
      return std::holds_alternative<WinDrawLoss>(outcome);
    case ModelKind::Ranking:
      return std::holds_alternative<Ranking>(outcome);
  }
  return false;
}

namespace {

[[noreturn]] void throw_mismatch(ModelKind kind, const GameOutcome& outcome) {
  const char* shape = std::visit(
      [](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, WinLoss>) return "win_loss";
        else if constexpr (std::is_same_v<T, Margin>) return "margin";
        else if constexpr (std::is_same_v<T, WinDrawLoss>) return "win_draw_loss";
        else return "ranking";
      },
      outcome);
  throw model_mismatch_error("model '" + to_string(kind) + "' cannot consume a '" +
                             std::string(shape) + "' outcome");
}

}  // namespace

double log_likelihood(ModelKind kind, const RatingVector& ratings, const GameOutcome& outcome,
                      const ModelParams& params) {
  if (kind == ModelKind::EloClassic || !outcome_matches(kind, outcome)) {
    throw_mismatch(kind, outcome);
  }
  switch (kind) {
    case ModelKind::WinLoss:
      return win_loss_log_likelihood(ratings, std::get<WinLoss>(outcome), params);
    case ModelKind::Margin:
      return margin_log_likelihood(ratings, std::get<Margin>(outcome), params);
    case ModelKind::WinDrawLoss:
      return wdl_log_likelihood(ratings, std::get<WinDrawLoss>(outcome), params);
    case ModelKind::Ranking:
      return ranking_log_likelihood(ratings, std::get<Ranking>(outcome), params);
    default:
      throw_mismatch(kind, outcome);
  }
}

ScoreVector score(ModelKind kind, const RatingVector& ratings, const GameOutcome& outcome,
                  const ModelParams& params) {
  if (kind == ModelKind::EloClassic || !outcome_matches(kind, outcome)) {
    throw_mismatch(kind, outcome);
  }
  switch (kind) {
    case ModelKind::WinLoss:
      return win_loss_score(ratings, std::get<WinLoss>(outcome), params);
    case ModelKind::Margin:
      return margin_score(ratings, std::get<Margin>(outcome), params);
    case ModelKind::WinDrawLoss:
      return wdl_score(ratings, std::get<WinDrawLoss>(outcome), params);
    case ModelKind::Ranking:
      return ranking_score(ratings, std::get<Ranking>(outcome), params);
    default:
      throw_mismatch(kind, outcome);
  }
}

}  // namespace scorelo
