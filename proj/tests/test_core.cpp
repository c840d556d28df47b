#include <doctest.h>

#include <limits>

#include "scorelo/core.hpp"

using namespace scorelo;

TEST_CASE("player ids reject empty, whitespace and delimiter characters") {
  CHECK_NOTHROW(PlayerId("alice"));
  CHECK_NOTHROW(PlayerId("p_1-x.y"));
  CHECK_THROWS_AS(PlayerId(""), validation_error);
  CHECK_THROWS_AS(PlayerId("a b"), validation_error);
  CHECK_THROWS_AS(PlayerId("a\tb"), validation_error);
  CHECK_THROWS_AS(PlayerId("a,b"), validation_error);
  CHECK_THROWS_AS(PlayerId("a>b"), validation_error);
  CHECK_THROWS_AS(PlayerId("#a"), validation_error);
}

TEST_CASE("model params validation") {
  CHECK_NOTHROW(ModelParams{}.validate());
  CHECK_THROWS_AS((ModelParams{.alpha = 0.0}.validate()), validation_error);
  CHECK_THROWS_AS((ModelParams{.alpha = -1.0}.validate()), validation_error);
  CHECK_THROWS_AS((ModelParams{.delta = -0.1}.validate()), validation_error);
  CHECK_THROWS_AS((ModelParams{.k_factor = 0.0}.validate()), validation_error);
  ModelParams nan_init;
  nan_init.r_init = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(nan_init.validate(), validation_error);
  CHECK_NOTHROW((ModelParams{.delta = 0.0}.validate()));
}

TEST_CASE("model kind names round-trip") {
  for (ModelKind kind : {ModelKind::WinLoss, ModelKind::Margin, ModelKind::WinDrawLoss,
                         ModelKind::Ranking, ModelKind::EloClassic}) {
    CHECK(model_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(model_kind_from_string("glicko"), validation_error);
}

TEST_CASE("outcome construction enforces invariants") {
  const PlayerId a("a"), b("b"), c("c");
  CHECK_THROWS_AS(WinLoss(a, a), validation_error);
  CHECK_THROWS_AS(Margin(a, a, 1, 0), validation_error);
  CHECK_THROWS_AS(Margin(a, b, -1, 0), validation_error);
  CHECK_NOTHROW(Margin(a, b, 2, 2));  // equal points are a legal margin outcome
  CHECK_THROWS_AS(WinDrawLoss(b, b, WdlResult::Draw), validation_error);
  CHECK_THROWS_AS(Ranking({a}), validation_error);
  CHECK_THROWS_AS(Ranking({a, b, a}), validation_error);

  const Ranking ranking({c, a, b});
  CHECK(ranking.rank_of(c) == 1);
  CHECK(ranking.rank_of(b) == 3);
  CHECK_THROWS_AS(ranking.rank_of(PlayerId("z")), validation_error);
}

TEST_CASE("participants per outcome shape") {
  const PlayerId a("a"), b("b"), c("c");
  CHECK(participants(WinLoss(a, b)) == std::vector<PlayerId>{a, b});
  CHECK(participants(Margin(a, b, 3, 1)) == std::vector<PlayerId>{a, b});
  CHECK(participants(Ranking({c, b, a})) == std::vector<PlayerId>{c, b, a});
}

TEST_CASE("game records reject negative time") {
  const PlayerId a("a"), b("b");
  CHECK_THROWS_AS(GameRecord(-1, WinLoss(a, b)), validation_error);
  CHECK_NOTHROW(GameRecord(0, WinLoss(a, b)));
}

TEST_CASE("rating vectors validate and look up") {
  const PlayerId a("a"), b("b");
  const RatingVector ratings({{a, 1.5}, {b, -0.5}});
  CHECK(ratings.at(a) == 1.5);
  CHECK(ratings.contains(b));
  CHECK_THROWS_AS(ratings.at(PlayerId("z")), validation_error);
  CHECK_THROWS_AS(RatingVector({{a, std::numeric_limits<double>::infinity()}}),
                  validation_error);
  CHECK(ratings.with(a, 2.0).at(a) == 2.0);
  CHECK(ratings.with(a, 2.0).at(b) == -0.5);
  CHECK(ratings.sum() == doctest::Approx(1.0).epsilon(1e-15));

  const RatingVector uniform = RatingVector::uniform({a, b}, 3.0);
  CHECK(uniform.mean() == 3.0);
}

TEST_CASE("rating history stores sparse updates and materializes on demand") {
  const PlayerId a("a"), b("b"), c("c");
  RatingHistory history(RatingVector({{a, 0.0}, {b, 0.0}, {c, 0.0}}));
  history.append(1, {{a, 0.05}, {b, -0.05}});
  history.append(3, {{b, 0.0}, {c, 0.0}});

  CHECK(history.after_step(0) == history.initial());
  CHECK(history.after_step(1).at(a) == 0.05);
  CHECK(history.after_step(1).at(c) == 0.0);
  CHECK(history.final_ratings().at(a) == 0.05);
  CHECK(history.games_played() ==
        std::map<PlayerId, std::int64_t>{{a, 1}, {b, 2}, {c, 1}});

  SUBCASE("time must strictly increase") {
    CHECK_THROWS_AS(history.append(3, {{a, 1.0}}), log_order_error);
    CHECK_THROWS_AS(history.append(2, {{a, 1.0}}), log_order_error);
  }
  SUBCASE("updates for unknown players are rejected") {
    CHECK_THROWS_AS(history.append(4, {{PlayerId("z"), 1.0}}), validation_error);
  }
}
