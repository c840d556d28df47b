#include <doctest.h>

#include <sstream>

#include "scorelo/logio.hpp"

using namespace scorelo;

namespace {

const PlayerId kA("a");
const PlayerId kB("b");
const PlayerId kC("c");

}  // namespace

TEST_CASE("game logs round-trip through text for every schema") {
  GameLog log;
  SUBCASE("win_loss") {
    log.model = ModelKind::WinLoss;
    log.records = {GameRecord(1, WinLoss(kA, kB)), GameRecord(4, WinLoss(kB, kC))};
  }
  SUBCASE("margin") {
    log.model = ModelKind::Margin;
    log.records = {GameRecord(0, Margin(kA, kB, 3, 1)), GameRecord(2, Margin(kC, kA, 0, 0))};
  }
  SUBCASE("win_draw_loss") {
    log.model = ModelKind::WinDrawLoss;
    log.records = {GameRecord(1, WinDrawLoss(kA, kB, WdlResult::Draw)),
                   GameRecord(2, WinDrawLoss(kA, kC, WdlResult::BWins))};
  }
  SUBCASE("ranking") {
    log.model = ModelKind::Ranking;
    log.records = {GameRecord(7, Ranking({kC, kA, kB})), GameRecord(9, Ranking({kA, kB}))};
  }
  SUBCASE("elo_classic uses the win_loss schema") {
    log.model = ModelKind::EloClassic;
    log.records = {GameRecord(1, WinLoss(kA, kB))};
  }

  std::stringstream stream;
  write_game_log(stream, log);
  const GameLog recovered = read_game_log(stream);
  CHECK(recovered.model == log.model);
  CHECK(recovered.records == log.records);
}

TEST_CASE("game log ingestion errors carry line numbers") {
  SUBCASE("missing model header") {
    std::stringstream stream("1,a,b\n");
    CHECK_THROWS_WITH_AS(read_game_log(stream),
                         "line 1: record before the #model=<name> header directive",
                         parse_error);
  }
  SUBCASE("unknown model name") {
    std::stringstream stream("#model=bogus\n");
    CHECK_THROWS_AS(read_game_log(stream), parse_error);
  }
  SUBCASE("wrong field count") {
    std::stringstream stream("#model=win_loss\n1,a\n");
    try {
      read_game_log(stream);
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("expected 3 fields") != std::string::npos);
    }
  }
  SUBCASE("non-numeric time") {
    std::stringstream stream("#model=win_loss\nx,a,b\n");
    CHECK_THROWS_AS(read_game_log(stream), parse_error);
  }
  SUBCASE("decreasing time index names the offending line") {
    std::stringstream stream("#model=win_loss\n2,a,b\n1,b,c\n");
    try {
      read_game_log(stream);
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("identical players") {
    std::stringstream stream("#model=win_loss\n1,a,a\n");
    CHECK_THROWS_AS(read_game_log(stream), parse_error);
  }
  SUBCASE("negative points") {
    std::stringstream stream("#model=margin\n1,a,-2,b,0\n");
    CHECK_THROWS_AS(read_game_log(stream), parse_error);
  }
  SUBCASE("bad win_draw_loss result token") {
    std::stringstream stream("#model=win_draw_loss\n1,a,b,X\n");
    CHECK_THROWS_AS(read_game_log(stream), parse_error);
  }
  SUBCASE("comments and blank lines are fine") {
    std::stringstream stream("# a comment\n\n#model=ranking\n# another\n3,a>b>c\n\n");
    const GameLog log = read_game_log(stream);
    CHECK(log.records.size() == 1);
    CHECK(std::get<Ranking>(log.records[0].outcome).ranked ==
          std::vector<PlayerId>{kA, kB, kC});
  }
}

TEST_CASE("player pool helpers") {
  GameLog log;
  log.model = ModelKind::WinLoss;
  log.records = {GameRecord(1, WinLoss(kA, kB)), GameRecord(2, WinLoss(kC, kA))};
  CHECK(players_in(log) == std::set<PlayerId>{kA, kB, kC});

  std::stringstream stream("a\n# comment\nb\n\nz9\n");
  CHECK(read_pool(stream) == std::set<PlayerId>{kA, kB, PlayerId("z9")});
}

TEST_CASE("ratings table is sorted by rating, ties by id") {
  const RatingVector ratings(
      {{PlayerId("dan"), 3.5}, {PlayerId("amy"), 7.25}, {PlayerId("bob"), 3.5}});
  std::stringstream stream;
  write_ratings_table(stream, ratings,
                      {{PlayerId("dan"), 4}, {PlayerId("amy"), 2}, {PlayerId("bob"), 0}});
  CHECK(stream.str() ==
        "player,rating,games_played\n"
        "amy,7.250000,2\n"
        "bob,3.500000,0\n"
        "dan,3.500000,4\n");
}

TEST_CASE("plot-data parsing validates the header") {
  std::stringstream stream("replication,time\n");
  CHECK_THROWS_AS(read_plot_data(stream), parse_error);
}

TEST_CASE("scenario files parse every field") {
  std::stringstream stream(R"({
    "players": ["a", "b", "c"],
    "model": "ranking",
    "horizon": 100,
    "pairing": {"type": "full_field_ranking", "participants": 3},
    "skills": {
      "a": {"type": "constant", "level": 1.0},
      "b": {"type": "step", "before": 0.0, "after": -1.0, "change_time": 50},
      "c": {"type": "piecewise", "knots": [[0, 0.0], [100, 2.0]]}
    }
  })");
  const SkillScenario scenario = read_scenario(stream);
  CHECK(scenario.players.size() == 3);
  CHECK(scenario.model == ModelKind::Ranking);
  CHECK(scenario.horizon == 100);
  CHECK(scenario.pairing == PairingPolicy::FullFieldRanking);
  CHECK(scenario.ranking_field_size == 3);
  CHECK(skill_at(scenario.skills.at(kA), 7) == 1.0);
  CHECK(skill_at(scenario.skills.at(kB), 50) == -1.0);
  CHECK(skill_at(scenario.skills.at(kC), 50) == doctest::Approx(1.0));
}

TEST_CASE("scenario errors name the offending field") {
  SUBCASE("bad model") {
    std::stringstream stream(R"({"players": ["a","b"], "model": "nope", "horizon": 1,
      "skills": {"a": {"type":"constant","level":0}, "b": {"type":"constant","level":0}}})");
    CHECK_THROWS_WITH_AS(read_scenario(stream),
                         doctest::Contains("scenario: model"), validation_error);
  }
  SUBCASE("missing horizon") {
    std::stringstream stream(R"({"players": ["a","b"], "model": "win_loss",
      "skills": {"a": {"type":"constant","level":0}, "b": {"type":"constant","level":0}}})");
    CHECK_THROWS_WITH_AS(read_scenario(stream),
                         doctest::Contains("scenario: horizon"), validation_error);
  }
  SUBCASE("unknown skill type") {
    std::stringstream stream(R"({"players": ["a","b"], "model": "win_loss", "horizon": 5,
      "skills": {"a": {"type":"weird"}, "b": {"type":"constant","level":0}}})");
    CHECK_THROWS_WITH_AS(read_scenario(stream),
                         doctest::Contains("skills.a.type"), validation_error);
  }
  SUBCASE("invalid JSON") {
    std::stringstream stream("{nope");
    CHECK_THROWS_WITH_AS(read_scenario(stream),
                         doctest::Contains("invalid JSON"), validation_error);
  }
}
