#pragma once

#include "scorelo/core.hpp"

namespace scorelo {

/// Gradient of the outcome log-likelihood with respect to each participant's
/// rating. Sparse: players without an entry have score exactly zero.
class ScoreVector {
 public:
  ScoreVector() = default;
  explicit ScoreVector(std::map<PlayerId, double> entries);

  double value(const PlayerId& player) const;  // 0 for non-participants
  const std::map<PlayerId, double>& entries() const { return entries_; }
  double sum() const;
  ScoreVector scaled(double factor) const;

  bool operator==(const ScoreVector&) const = default;

 private:
  std::map<PlayerId, double> entries_;
};

// --- Win/loss (logistic) -----------------------------------------------------
// f = 1 / (1 + exp(-alpha (r_w - r_l))) for the observed winner w.

double win_loss_log_likelihood(const RatingVector& ratings, const WinLoss& outcome,
                               const ModelParams& params);
ScoreVector win_loss_score(const RatingVector& ratings, const WinLoss& outcome,
                           const ModelParams& params);

// --- Margin of victory (Skellam point difference) ---------------------------
// Point difference d = points_a - points_b follows a Skellam law with rates
// exp(+alpha (r_a - r_b)) and exp(-alpha (r_a - r_b)), so the Bessel argument
// 2 sqrt(lambda_a lambda_b) is the constant 2.

double margin_log_likelihood(const RatingVector& ratings, const Margin& outcome,
                             const ModelParams& params);
ScoreVector margin_score(const RatingVector& ratings, const Margin& outcome,
                         const ModelParams& params);

// --- Win/draw/loss (ordered logit) -------------------------------------------
// Draw threshold delta >= 0; delta = 0 collapses the draw category, so a draw
// observed under delta = 0 raises degenerate_likelihood_error.

double wdl_log_likelihood(const RatingVector& ratings, const WinDrawLoss& outcome,
                          const ModelParams& params);
ScoreVector wdl_score(const RatingVector& ratings, const WinDrawLoss& outcome,
                      const ModelParams& params);

// --- Ranking (Plackett-Luce) -------------------------------------------------
// Successive places chosen proportionally to exp(alpha r) among the players
// still unplaced; evaluated through log-sum-exp for stability.

double ranking_log_likelihood(const RatingVector& ratings, const Ranking& outcome,
                              const ModelParams& params);
ScoreVector ranking_score(const RatingVector& ratings, const Ranking& outcome,
                          const ModelParams& params);

// --- Classical Elo reference --------------------------------------------------
// Fixed conventional constants: K = 16, base 10, divisor 400, initial 1200.

inline constexpr double kEloClassicKFactor = 16.0;
inline constexpr double kEloClassicBase = 10.0;
inline constexpr double kEloClassicScale = 400.0;
inline constexpr double kEloClassicInitialRating = 1200.0;

RatingVector elo_classic_update(const RatingVector& ratings, const WinLoss& outcome);

// --- Dispatch -----------------------------------------------------------------

bool outcome_matches(ModelKind kind, const GameOutcome& outcome);

// Both throw model_mismatch_error on an incompatible (kind, outcome) pair and
// reject EloClassic, which defines an update rule but no score.
double log_likelihood(ModelKind kind, const RatingVector& ratings,
                      const GameOutcome& outcome, const ModelParams& params);
ScoreVector score(ModelKind kind, const RatingVector& ratings, const GameOutcome& outcome,
                  const ModelParams& params);

}  // namespace scorelo
