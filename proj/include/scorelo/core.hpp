#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace scorelo {

// Error taxonomy. Every invariant violation surfaces as one of these rather
// than silently producing garbage.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class validation_error : public error {
 public:
  using error::error;
};

// Outcome type fed to an engine configured for a different model.
class model_mismatch_error : public error {
 public:
  using error::error;
};

// Out-of-order or duplicate time index in a game log.
class log_order_error : public error {
 public:
  using error::error;
};

// The model assigns probability zero to the observed outcome (e.g. a draw
// under a zero draw threshold); the score is undefined there.
class degenerate_likelihood_error : public error {
 public:
  using error::error;
};

// Request exceeds an enumeration cap (ranking outcome spaces grow as m!).
class size_limit_error : public error {
 public:
  using error::error;
};

// File ingestion failure; carries the 1-based line number.
class parse_error : public error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Opaque player token. Non-empty, no whitespace, and none of the characters
/// used as field delimiters in the text formats (',' '>' '#').
class PlayerId {
 public:
  explicit PlayerId(std::string id);
  const std::string& str() const { return id_; }
  friend auto operator<=>(const PlayerId&, const PlayerId&) = default;

 private:
  std::string id_;
};

enum class ModelKind { WinLoss, Margin, WinDrawLoss, Ranking, EloClassic };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Parameters of the outcome models. delta is only consulted by the
// win/draw/loss model. Defaults keep score-driven ratings O(1).
struct ModelParams {
  double alpha = 1.0;
  double delta = 1.0;
  double k_factor = 0.1;
  double r_init = 0.0;

  void validate() const;  // throws validation_error
};

// --- Game outcomes ----------------------------------------------------------

struct WinLoss {
  PlayerId winner;
  PlayerId loser;
  WinLoss(PlayerId winner, PlayerId loser);
  bool operator==(const WinLoss&) const = default;
};

// Points scored by each side; the margin model consumes only the difference
// but the raw points are kept for ingestion fidelity. Equal points are legal.
struct Margin {
  PlayerId player_a;
  PlayerId player_b;
  std::int64_t points_a;
  std::int64_t points_b;
  Margin(PlayerId player_a, PlayerId player_b, std::int64_t points_a,
         std::int64_t points_b);
  std::int64_t difference() const { return points_a - points_b; }
  bool operator==(const Margin&) const = default;
};

enum class WdlResult { AWins, Draw, BWins };

struct WinDrawLoss {
  PlayerId player_a;
  PlayerId player_b;
  WdlResult result;
  WinDrawLoss(PlayerId player_a, PlayerId player_b, WdlResult result);
  bool operator==(const WinDrawLoss&) const = default;
};

// Complete ranking over a participant subset, best first. Storing the order
// as a list rules out inconsistent rank assignments by construction.
struct Ranking {
  std::vector<PlayerId> ranked;
  explicit Ranking(std::vector<PlayerId> ranked);
  std::size_t size() const { return ranked.size(); }
  // 1-based rank of a participant; throws validation_error for outsiders.
  std::size_t rank_of(const PlayerId& player) const;
  bool operator==(const Ranking&) const = default;
};

using GameOutcome = std::variant<WinLoss, Margin, WinDrawLoss, Ranking>;

std::vector<PlayerId> participants(const GameOutcome& outcome);

struct GameRecord {
  std::int64_t time_index;
  GameOutcome outcome;
  GameRecord(std::int64_t time_index, GameOutcome outcome);
  bool operator==(const GameRecord&) const = default;
};

// --- Ratings ----------------------------------------------------------------

/// Immutable map from player to rating. All entries finite.
class RatingVector {
 public:
  RatingVector() = default;
  explicit RatingVector(std::map<PlayerId, double> entries);
  static RatingVector uniform(const std::set<PlayerId>& pool, double value);

  double at(const PlayerId& player) const;  // validation_error if unknown
  bool contains(const PlayerId& player) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<PlayerId, double>& entries() const { return entries_; }

  // Copy with one entry replaced (or added); value must be finite.
  RatingVector with(const PlayerId& player, double value) const;

  double sum() const;
  double mean() const;

  bool operator==(const RatingVector&) const = default;

 private:
  std::map<PlayerId, double> entries_;
};

/// Replay output: the initial ratings plus, per game, the new ratings of that
/// game's participants. Ratings of absent players carry forward; full vectors
/// are materialized on demand rather than stored per step.
class RatingHistory {
 public:
  explicit RatingHistory(RatingVector initial);

  struct Step {
    std::int64_t time_index;
    std::map<PlayerId, double> updated;  // participants only
    bool operator==(const Step&) const = default;
  };

  // Appends one game's updates; time indices must be strictly increasing and
  // every updated player must exist in the initial vector.
  void append(std::int64_t time_index, std::map<PlayerId, double> updated);

  const RatingVector& initial() const { return initial_; }
  const std::vector<Step>& steps() const { return steps_; }

  // Ratings after the first `count` games (count == 0 gives the initial).
  RatingVector after_step(std::size_t count) const;
  RatingVector final_ratings() const { return after_step(steps_.size()); }

  std::map<PlayerId, std::int64_t> games_played() const;

  bool operator==(const RatingHistory&) const = default;

 private:
  RatingVector initial_;
  std::vector<Step> steps_;
};

}  // namespace scorelo
