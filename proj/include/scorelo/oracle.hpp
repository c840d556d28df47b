#pragma once

#include "scorelo/models.hpp"

namespace scorelo {

// Enumerations stop at m! = 8! rankings; beyond that the proposition suites
// would dominate the build time.
inline constexpr int kMaxRankingEnumeration = 8;

// Skellam enumeration widens its truncation radius until the geometric tail
// bound drops below this.
inline constexpr double kSkellamTailTarget = 1e-12;

struct WeightedOutcome {
  GameOutcome outcome;
  double probability;
};

/// Exhaustive outcome space of a model at fixed ratings. For the margin model
/// the space is truncated; tail_bound bounds the omitted mass.
struct OutcomeSpace {
  std::vector<WeightedOutcome> outcomes;
  double tail_bound = 0.0;
};

// Central-difference approximation of the score, one participant coordinate at
// a time. Entirely independent of the closed-form score path. Throws
// degenerate_likelihood_error if the log-likelihood is not finite at a
// perturbed point.
ScoreVector finite_diff_score(ModelKind kind, const RatingVector& ratings,
                              const GameOutcome& outcome, const ModelParams& params,
                              double step = 1e-5);

// participants: the two players (pair models) or the game field (ranking).
// truncation: starting radius for the margin model's difference support,
// widened adaptively until the tail bound is below kSkellamTailTarget.
OutcomeSpace enumerate_outcomes(ModelKind kind, const std::vector<PlayerId>& participants,
                                const RatingVector& ratings, const ModelParams& params,
                                std::int64_t truncation = 60);

// E[score(ratings_eval; Y)] with Y drawn from the model at ratings_truth,
// by exact summation over the enumerated space. ratings_truth plays the role
// of the unobserved true skills.
ScoreVector expected_score(ModelKind kind, const std::vector<PlayerId>& participants,
                           const RatingVector& ratings_eval, const RatingVector& ratings_truth,
                           const ModelParams& params, std::int64_t truncation = 60);

}  // namespace scorelo
