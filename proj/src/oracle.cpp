#include "scorelo/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace scorelo {

namespace {

void check_finite_log_likelihood(double value) {
  if (!std::isfinite(value)) {
    throw degenerate_likelihood_error("log-likelihood not finite at perturbed ratings");
  }
}

void validate_space(const OutcomeSpace& space) {
  double total = 0.0;
  for (const auto& [_, p] : space.outcomes) {
    if (!(p >= 0.0) || p > 1.0 + 1e-12) {
      throw validation_error("enumerated probability outside [0, 1]");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > space.tail_bound + 1e-9) {
    throw validation_error("enumerated probabilities sum to " + std::to_string(total));
  }
}

OutcomeSpace enumerate_win_loss(const std::vector<PlayerId>& participants,
                                const RatingVector& ratings, const ModelParams& params) {
  if (participants.size() != 2) {
    throw validation_error("win_loss enumeration requires exactly 2 participants");
  }
  const PlayerId& a = participants[0];
  const PlayerId& b = participants[1];
  OutcomeSpace space;
  space.outcomes.push_back(
      {WinLoss(a, b), std::exp(win_loss_log_likelihood(ratings, WinLoss(a, b), params))});
  space.outcomes.push_back(
      {WinLoss(b, a), std::exp(win_loss_log_likelihood(ratings, WinLoss(b, a), params))});
  return space;
}

OutcomeSpace enumerate_wdl(const std::vector<PlayerId>& participants,
                           const RatingVector& ratings, const ModelParams& params) {
  if (participants.size() != 2) {
    throw validation_error("win_draw_loss enumeration requires exactly 2 participants");
  }
  const PlayerId& a = participants[0];
  const PlayerId& b = participants[1];
  OutcomeSpace space;
  for (WdlResult result : {WdlResult::AWins, WdlResult::Draw, WdlResult::BWins}) {
    if (result == WdlResult::Draw && params.delta == 0.0) continue;  // zero mass
    WinDrawLoss outcome(a, b, result);
    space.outcomes.push_back({outcome, std::exp(wdl_log_likelihood(ratings, outcome, params))});
  }
  return space;
}

OutcomeSpace enumerate_ranking(const std::vector<PlayerId>& participants,
                               const RatingVector& ratings, const ModelParams& params) {
  if (participants.size() < 2) {
    throw validation_error("ranking enumeration requires at least 2 participants");
  }
  if (participants.size() > static_cast<std::size_t>(kMaxRankingEnumeration)) {
    throw size_limit_error("ranking enumeration capped at m = " +
                           std::to_string(kMaxRankingEnumeration) + ", got m = " +
                           std::to_string(participants.size()));
  }
  std::vector<PlayerId> order = participants;
  std::sort(order.begin(), order.end());
  OutcomeSpace space;
  do {
    Ranking outcome(order);
    space.outcomes.push_back(
        {outcome, std::exp(ranking_log_likelihood(ratings, outcome, params))});
  } while (std::next_permutation(order.begin(), order.end()));
  return space;
}

// Tail of the Skellam difference distribution past +/-radius, bounded through
// the term ratio f(d+1)/f(d) <= e^x / (d+1) (and its mirror image), which is
// geometric once the radius exceeds e^|x|.
double skellam_tail_bound(double x, std::int64_t radius, double mass_at_upper,
                          double mass_at_lower) {
  const double q_up = std::exp(x) / static_cast<double>(radius + 1);
  const double q_down = std::exp(-x) / static_cast<double>(radius + 1);
  if (q_up >= 1.0 || q_down >= 1.0) return 1.0;
  return mass_at_upper * q_up / (1.0 - q_up) + mass_at_lower * q_down / (1.0 - q_down);
}

OutcomeSpace enumerate_margin(const std::vector<PlayerId>& participants,
                              const RatingVector& ratings, const ModelParams& params,
                              std::int64_t truncation) {
  if (participants.size() != 2) {
    throw validation_error("margin enumeration requires exactly 2 participants");
  }
  if (truncation < 1) {
    throw validation_error("margin truncation radius must be >= 1");
  }
  const PlayerId& a = participants[0];
  const PlayerId& b = participants[1];
  const double x = params.alpha * (ratings.at(a) - ratings.at(b));

  auto mass_at = [&](std::int64_t d) {
    const Margin outcome(a, b, d >= 0 ? d : 0, d >= 0 ? 0 : -d);
    return std::exp(margin_log_likelihood(ratings, outcome, params));
  };

  std::int64_t radius = truncation;
  double tail = skellam_tail_bound(x, radius, mass_at(radius), mass_at(-radius));
  while (tail > kSkellamTailTarget) {
    radius *= 2;
    if (radius > (1 << 24)) {
      throw validation_error("skellam truncation radius diverged");
    }
    tail = skellam_tail_bound(x, radius, mass_at(radius), mass_at(-radius));
  }

  OutcomeSpace space;
  space.tail_bound = tail;
  space.outcomes.reserve(static_cast<std::size_t>(2 * radius + 1));
  for (std::int64_t d = -radius; d <= radius; ++d) {
    space.outcomes.push_back({Margin(a, b, d >= 0 ? d : 0, d >= 0 ? 0 : -d), mass_at(d)});
  }
  return space;
}

}  // namespace

ScoreVector finite_diff_score(ModelKind kind, const RatingVector& ratings,
                              const GameOutcome& outcome, const ModelParams& params,
                              double step) {
  if (!(step > 0.0)) {
    throw validation_error("finite-difference step must be > 0");
  }
  std::map<PlayerId, double> grads;
  for (const auto& player : participants(outcome)) {
    const double r = ratings.at(player);
    const double up = log_likelihood(kind, ratings.with(player, r + step), outcome, params);
    const double down = log_likelihood(kind, ratings.with(player, r - step), outcome, params);
    check_finite_log_likelihood(up);
    check_finite_log_likelihood(down);
    grads[player] = (up - down) / (2.0 * step);
  }
  return ScoreVector(std::move(grads));
}

OutcomeSpace enumerate_outcomes(ModelKind kind, const std::vector<PlayerId>& participants,
                                const RatingVector& ratings, const ModelParams& params,
                                std::int64_t truncation) {
  params.validate();
  OutcomeSpace space;
  switch (kind) {
    case ModelKind::WinLoss:
      space = enumerate_win_loss(participants, ratings, params);
      break;
    case ModelKind::WinDrawLoss:
      space = enumerate_wdl(participants, ratings, params);
      break;
    case ModelKind::Ranking:
      space = enumerate_ranking(participants, ratings, params);
      break;
    case ModelKind::Margin:
      space = enumerate_margin(participants, ratings, params, truncation);
      break;
    case ModelKind::EloClassic:
      throw model_mismatch_error("elo_classic defines no outcome distribution to enumerate");
  }
  validate_space(space);
  return space;
}

ScoreVector expected_score(ModelKind kind, const std::vector<PlayerId>& participants,
                           const RatingVector& ratings_eval, const RatingVector& ratings_truth,
                           const ModelParams& params, std::int64_t truncation) {
  const OutcomeSpace space =
      enumerate_outcomes(kind, participants, ratings_truth, params, truncation);
  std::map<PlayerId, double> expectation;
  for (const auto& player : participants) expectation[player] = 0.0;
  for (const auto& [outcome, probability] : space.outcomes) {
    const ScoreVector grad = score(kind, ratings_eval, outcome, params);
    for (const auto& [player, g] : grad.entries()) {
      expectation[player] += probability * g;
    }
  }
  return ScoreVector(std::move(expectation));
}

}  // namespace scorelo
