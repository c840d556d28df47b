#include "scorelo/logio.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace scorelo {

namespace {

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::int64_t parse_int(const std::string& field, std::size_t line_no, const char* what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw parse_error(line_no, std::string(what) + " '" + field + "' is not an integer");
  }
  return value;
}

double parse_double(const std::string& field, std::size_t line_no, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw parse_error(line_no, std::string(what) + " '" + field + "' is not a number");
  }
  return value;
}

PlayerId parse_player(const std::string& field, std::size_t line_no, const char* what) {
  try {
    return PlayerId(field);
  } catch (const validation_error& e) {
    throw parse_error(line_no, std::string(what) + ": " + e.what());
  }
}

void require_fields(const std::vector<std::string>& fields, std::size_t expected,
                    std::size_t line_no) {
  if (fields.size() != expected) {
    throw parse_error(line_no, "expected " + std::to_string(expected) + " fields, got " +
                                   std::to_string(fields.size()));
  }
}

GameRecord parse_record(ModelKind model, const std::string& line, std::size_t line_no) {
  const auto fields = split(line, ',');
  try {
    switch (model) {
      case ModelKind::WinLoss:
      case ModelKind::EloClassic: {
        require_fields(fields, 3, line_no);
        return GameRecord(parse_int(fields[0], line_no, "time index"),
                          WinLoss(parse_player(fields[1], line_no, "winner"),
                                  parse_player(fields[2], line_no, "loser")));
      }
      case ModelKind::Margin: {
        require_fields(fields, 5, line_no);
        return GameRecord(parse_int(fields[0], line_no, "time index"),
                          Margin(parse_player(fields[1], line_no, "player_a"),
                                 parse_player(fields[3], line_no, "player_b"),
                                 parse_int(fields[2], line_no, "points_a"),
                                 parse_int(fields[4], line_no, "points_b")));
      }
      case ModelKind::WinDrawLoss: {
        require_fields(fields, 4, line_no);
        WdlResult result;
        if (fields[3] == "A") result = WdlResult::AWins;
        else if (fields[3] == "D") result = WdlResult::Draw;
        else if (fields[3] == "B") result = WdlResult::BWins;
        else throw parse_error(line_no, "result '" + fields[3] + "' is not one of A, D, B");
        return GameRecord(parse_int(fields[0], line_no, "time index"),
                          WinDrawLoss(parse_player(fields[1], line_no, "player_a"),
                                      parse_player(fields[2], line_no, "player_b"), result));
      }
      case ModelKind::Ranking: {
        require_fields(fields, 2, line_no);
        std::vector<PlayerId> ranked;
        for (const auto& token : split(fields[1], '>')) {
          ranked.push_back(parse_player(token, line_no, "ranked player"));
        }
        return GameRecord(parse_int(fields[0], line_no, "time index"),
                          Ranking(std::move(ranked)));
      }
    }
  } catch (const parse_error&) {
    throw;
  } catch (const error& e) {
    throw parse_error(line_no, e.what());
  }
  throw parse_error(line_no, "unknown model");
}

}  // namespace

GameLog read_game_log(std::istream& in) {
  GameLog log;
  std::string line;
  std::size_t line_no = 0;
  bool have_model = false;
  std::int64_t previous_time = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.rfind("#model=", 0) == 0) {
        if (have_model) throw parse_error(line_no, "duplicate #model directive");
        try {
          log.model = model_kind_from_string(line.substr(7));
        } catch (const error& e) {
          throw parse_error(line_no, e.what());
        }
        have_model = true;
      }
      continue;
    }
    if (!have_model) {
      throw parse_error(line_no, "record before the #model=<name> header directive");
    }
    GameRecord record = parse_record(log.model, line, line_no);
    if (record.time_index <= previous_time) {
      throw parse_error(line_no, "time index " + std::to_string(record.time_index) +
                                     " does not increase past " +
                                     std::to_string(previous_time));
    }
    previous_time = record.time_index;
    log.records.push_back(std::move(record));
  }
  if (!have_model) {
    throw parse_error(line_no == 0 ? 1 : line_no, "missing #model=<name> header directive");
  }
  return log;
}

GameLog load_game_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw validation_error("cannot open game log '" + path + "'");
  }
  return read_game_log(in);
}

void write_game_log(std::ostream& out, const GameLog& log) {
  out << "#model=" << to_string(log.model) << "\n";
  for (const auto& record : log.records) {
    out << record.time_index << ',';
    std::visit(
        [&out](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, WinLoss>) {
            out << o.winner.str() << ',' << o.loser.str();
          } else if constexpr (std::is_same_v<T, Margin>) {
            out << o.player_a.str() << ',' << o.points_a << ',' << o.player_b.str() << ','
                << o.points_b;
          } else if constexpr (std::is_same_v<T, WinDrawLoss>) {
            const char* result = o.result == WdlResult::AWins  ? "A"
                                 : o.result == WdlResult::Draw ? "D"
                                                               : "B";
            out << o.player_a.str() << ',' << o.player_b.str() << ',' << result;
          } else {
            for (std::size_t i = 0; i < o.ranked.size(); ++i) {
              if (i > 0) out << '>';
              out << o.ranked[i].str();
            }
          }
        },
        record.outcome);
    out << '\n';
  }
}

std::set<PlayerId> players_in(const GameLog& log) {
  std::set<PlayerId> pool;
  for (const auto& record : log.records) {
    for (const auto& p : participants(record.outcome)) pool.insert(p);
  }
  return pool;
}

std::set<PlayerId> read_pool(std::istream& in) {
  std::set<PlayerId> pool;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    try {
      pool.insert(PlayerId(line));
    } catch (const error& e) {
      throw parse_error(line_no, e.what());
    }
  }
  return pool;
}

std::set<PlayerId> load_pool(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw validation_error("cannot open pool file '" + path + "'");
  }
  return read_pool(in);
}

namespace {

// Shortest decimal digits that parse back to the same double.
std::string format_full(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace

void write_plot_data(std::ostream& out, const std::vector<PlotRow>& rows) {
  out << "replication,time,player,rating,band_low,band_high\n";
  for (const auto& row : rows) {
    out << row.replication << ',' << row.time << ',' << row.player.str() << ','
        << format_full(row.rating) << ',';
    if (row.band_low) out << format_full(*row.band_low);
    out << ',';
    if (row.band_high) out << format_full(*row.band_high);
    out << '\n';
  }
}

std::vector<PlotRow> read_plot_data(std::istream& in) {
  std::vector<PlotRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header) {
      if (line != "replication,time,player,rating,band_low,band_high") {
        throw parse_error(line_no, "unexpected plot-data header '" + line + "'");
      }
      have_header = true;
      continue;
    }
    const auto fields = split(line, ',');
    require_fields(fields, 6, line_no);
    PlotRow row{fields[0], parse_int(fields[1], line_no, "time"),
                parse_player(fields[2], line_no, "player"),
                parse_double(fields[3], line_no, "rating"), std::nullopt, std::nullopt};
    if (!fields[4].empty()) row.band_low = parse_double(fields[4], line_no, "band_low");
    if (!fields[5].empty()) row.band_high = parse_double(fields[5], line_no, "band_high");
    rows.push_back(std::move(row));
  }
  if (!have_header) {
    throw parse_error(1, "empty plot-data table");
  }
  return rows;
}

void write_ratings_table(std::ostream& out, const RatingVector& ratings,
                         const std::map<PlayerId, std::int64_t>& games_played) {
  std::vector<std::pair<PlayerId, double>> order(ratings.entries().begin(),
                                                 ratings.entries().end());
  std::stable_sort(order.begin(), order.end(), [](const auto& lhs, const auto& rhs) {
    if (lhs.second != rhs.second) return lhs.second > rhs.second;
    return lhs.first < rhs.first;
  });
  out << "player,rating,games_played\n";
  for (const auto& [player, rating] : order) {
    const auto it = games_played.find(player);
    const std::int64_t games = it == games_played.end() ? 0 : it->second;
    char value[64];
    std::snprintf(value, sizeof(value), "%.6f", rating);
    out << player.str() << ',' << value << ',' << games << '\n';
  }
}

namespace {

using nlohmann::json;

[[noreturn]] void scenario_error(const std::string& field, const std::string& message) {
  throw validation_error("scenario: " + field + ": " + message);
}

double require_number(const json& node, const std::string& field) {
  if (!node.is_number()) scenario_error(field, "expected a number");
  return node.get<double>();
}

std::int64_t require_integer(const json& node, const std::string& field) {
  if (!node.is_number_integer()) scenario_error(field, "expected an integer");
  return node.get<std::int64_t>();
}

std::string require_string(const json& node, const std::string& field) {
  if (!node.is_string()) scenario_error(field, "expected a string");
  return node.get<std::string>();
}

SkillFn parse_skill(const json& node, const std::string& field) {
  if (!node.is_object()) scenario_error(field, "expected an object");
  const std::string type = require_string(node.value("type", json()), field + ".type");
  if (type == "constant") {
    return ConstantSkill{require_number(node.value("level", json()), field + ".level")};
  }
  if (type == "step") {
    return StepChangeSkill{
        require_number(node.value("before", json()), field + ".before"),
        require_number(node.value("after", json()), field + ".after"),
        require_integer(node.value("change_time", json()), field + ".change_time")};
  }
  if (type == "piecewise") {
    const json& knots = node.value("knots", json());
    if (!knots.is_array()) scenario_error(field + ".knots", "expected an array");
    PiecewiseLinearSkill skill;
    for (const auto& knot : knots) {
      if (!knot.is_array() || knot.size() != 2) {
        scenario_error(field + ".knots", "each knot must be a [time, level] pair");
      }
      skill.knots.emplace_back(require_integer(knot[0], field + ".knots[].time"),
                               require_number(knot[1], field + ".knots[].level"));
    }
    return skill;
  }
  scenario_error(field + ".type", "unknown skill type '" + type +
                                      "' (expected constant, step or piecewise)");
}

}  // namespace

SkillScenario read_scenario(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw validation_error(std::string("scenario: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw validation_error("scenario: top level must be an object");
  }
  SkillScenario scenario;
  if (!doc.contains("players")) scenario_error("players", "missing");
  if (!doc["players"].is_array()) scenario_error("players", "expected an array");
  for (const auto& entry : doc["players"]) {
    const std::string name = require_string(entry, "players[]");
    try {
      scenario.players.emplace_back(name);
    } catch (const error& e) {
      scenario_error("players[]", e.what());
    }
  }
  if (!doc.contains("model")) scenario_error("model", "missing");
  try {
    scenario.model = model_kind_from_string(require_string(doc["model"], "model"));
  } catch (const error& e) {
    scenario_error("model", e.what());
  }
  if (!doc.contains("horizon")) scenario_error("horizon", "missing");
  scenario.horizon = require_integer(doc["horizon"], "horizon");
  if (!doc.contains("skills") || !doc["skills"].is_object()) {
    scenario_error("skills", "missing or not an object");
  }
  for (const auto& [name, node] : doc["skills"].items()) {
    try {
      scenario.skills.emplace(PlayerId(name), parse_skill(node, "skills." + name));
    } catch (const validation_error& e) {
      if (std::string(e.what()).rfind("scenario:", 0) == 0) throw;
      scenario_error("skills." + name, e.what());
    }
  }
  if (doc.contains("pairing")) {
    const json& pairing = doc["pairing"];
    if (!pairing.is_object()) scenario_error("pairing", "expected an object");
    try {
      scenario.pairing =
          pairing_policy_from_string(require_string(pairing.value("type", json()), "pairing.type"));
    } catch (const error& e) {
      scenario_error("pairing.type", e.what());
    }
    if (scenario.pairing == PairingPolicy::FullFieldRanking) {
      scenario.ranking_field_size = static_cast<int>(
          require_integer(pairing.value("participants", json()), "pairing.participants"));
    }
  }
  scenario.validate();
  return scenario;
}

SkillScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw validation_error("cannot open scenario '" + path + "'");
  }
  return read_scenario(in);
}

}  // namespace scorelo
