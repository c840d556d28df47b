#pragma once

#include <iosfwd>

#include "scorelo/sim.hpp"

namespace scorelo {

/// A parsed game-log file: a `#model=<name>` header directive followed by one
/// comma-separated record per line. Line schemas per model:
///   win_loss       t,winner,loser
///   margin         t,player_a,points_a,player_b,points_b
///   win_draw_loss  t,player_a,player_b,result        result in {A,D,B}
///   ranking        t,player1>player2>...>playerM     best first
/// Blank lines and further '#' lines are ignored. Time indices must strictly
/// increase. elo_classic logs use the win_loss schema.
struct GameLog {
  ModelKind model = ModelKind::WinLoss;
  std::vector<GameRecord> records;
};

GameLog read_game_log(std::istream& in);
GameLog load_game_log(const std::string& path);
void write_game_log(std::ostream& out, const GameLog& log);

std::set<PlayerId> players_in(const GameLog& log);

// Pool file: one player id per line, '#' comments and blanks ignored.
std::set<PlayerId> read_pool(std::istream& in);
std::set<PlayerId> load_pool(const std::string& path);

// Plot-data table, header `replication,time,player,rating,band_low,band_high`.
// Ratings are printed with shortest round-trip precision, so read-back is
// bit-exact.
void write_plot_data(std::ostream& out, const std::vector<PlotRow>& rows);
std::vector<PlotRow> read_plot_data(std::istream& in);

// Final standings, `player,rating,games_played`, rating descending with ties
// broken by id; ratings at 6 decimal places.
void write_ratings_table(std::ostream& out, const RatingVector& ratings,
                         const std::map<PlayerId, std::int64_t>& games_played);

// Scenario config (JSON mirror of SkillScenario, see README for the schema).
SkillScenario read_scenario(std::istream& in);
SkillScenario load_scenario(const std::string& path);

}  // namespace scorelo
