#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scorelo/logio.hpp"
#include "scorelo/verify.hpp"

namespace {

using namespace scorelo;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;  // ingestion / validation failure
constexpr int kExitPropertyFailure = 2;

struct ParamFlags {
  std::optional<std::string> model;
  std::optional<double> alpha;
  std::optional<double> delta;
  std::optional<double> k_factor;
  std::optional<double> r_init;
};

void add_param_flags(CLI::App* cmd, ParamFlags& flags, const std::string& model_help) {
  cmd->add_option("--model", flags.model, model_help);
  cmd->add_option("--alpha", flags.alpha, "Scaling constant (> 0)");
  cmd->add_option("--delta", flags.delta, "Draw threshold (>= 0, win_draw_loss only)");
  cmd->add_option("--k", flags.k_factor, "K-factor (> 0)");
  cmd->add_option("--r-init", flags.r_init, "Initial rating");
}

// Precedence: defaults, then config file, then explicit flags.
ModelParams resolve_params(const ParamFlags& flags, const nlohmann::json& config) {
  ModelParams params;
  if (config.contains("alpha")) params.alpha = config["alpha"].get<double>();
  if (config.contains("delta")) params.delta = config["delta"].get<double>();
  if (config.contains("k")) params.k_factor = config["k"].get<double>();
  if (config.contains("r_init")) params.r_init = config["r_init"].get<double>();
  if (flags.alpha) params.alpha = *flags.alpha;
  if (flags.delta) params.delta = *flags.delta;
  if (flags.k_factor) params.k_factor = *flags.k_factor;
  if (flags.r_init) params.r_init = *flags.r_init;
  params.validate();
  return params;
}

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open config '" + path + "'");
  try {
    nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.is_object()) throw validation_error("config: top level must be an object");
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("config: invalid JSON: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write '" + path + "'");
  out << text;
}

std::vector<PlotRow> history_rows(const RatingHistory& history) {
  std::map<PlayerId, double> current = history.initial().entries();
  std::vector<PlotRow> rows;
  for (const auto& step : history.steps()) {
    for (const auto& [player, rating] : step.updated) current[player] = rating;
    for (const auto& [player, rating] : current) {
      rows.push_back(PlotRow{"0", step.time_index, player, rating, std::nullopt, std::nullopt});
    }
  }
  return rows;
}

int run_rate(const std::string& log_path, const std::string& config_path,
             const ParamFlags& flags, const std::string& pool_path,
             const std::string& out_path, const std::string& history_path) {
  const GameLog log = load_game_log(log_path);
  const nlohmann::json config = load_config(config_path);

  EngineConfig engine;
  engine.model = log.model;
  if (config.contains("model")) {
    engine.model = model_kind_from_string(config["model"].get<std::string>());
  }
  if (flags.model) engine.model = model_kind_from_string(*flags.model);
  engine.params = resolve_params(flags, config);
  engine.player_pool = pool_path.empty() ? players_in(log) : load_pool(pool_path);
  if (engine.player_pool.empty()) {
    throw validation_error("empty player pool: log has no games and no --pool was given");
  }

  const RatingHistory history = replay(log.records, engine);
  std::ostringstream table;
  write_ratings_table(table, history.final_ratings(), history.games_played());
  if (out_path.empty()) {
    std::cout << table.str();
  } else {
    write_text_file(out_path, table.str());
  }
  if (!history_path.empty()) {
    std::ostringstream plot;
    write_plot_data(plot, history_rows(history));
    write_text_file(history_path, plot.str());
  }
  return kExitOk;
}

int run_verify(std::size_t cases, std::uint64_t seed, const std::optional<std::string>& model,
               bool inject_sign_flip, const std::string& out_path) {
  VerifyOptions options = VerifyOptions::with_case_budget(cases);
  options.seed = seed;
  if (model) options.model = model_kind_from_string(*model);
  options.mutation = inject_sign_flip ? Mutation::FlipWinLossScoreSign : Mutation::None;

  const std::vector<PropertyReport> reports = run_property_suite(options);
  std::ostringstream text;
  char line[160];
  std::snprintf(line, sizeof(line), "%-30s %8s %14s %10s  %s\n", "property", "cases",
                "worst-residual", "tolerance", "result");
  text << line;
  bool all_passed = true;
  for (const auto& report : reports) {
    std::snprintf(line, sizeof(line), "%-30s %8zu %14.3e %10.0e  %s%s%s\n",
                  report.name.c_str(), report.cases, report.worst_residual, report.tolerance,
                  report.passed ? "PASS" : "FAIL", report.note.empty() ? "" : "  # ",
                  report.note.c_str());
    text << line;
    all_passed = all_passed && report.passed;
  }
  text << (all_passed ? "all properties hold\n" : "PROPERTY FAILURE\n");
  std::cout << text.str();
  if (!out_path.empty()) write_text_file(out_path, text.str());
  return all_passed ? kExitOk : kExitPropertyFailure;
}

int run_simulate(const std::string& scenario_path, int replications, std::uint64_t seed,
                 const ParamFlags& flags, const std::string& out_path,
                 const std::string& log_out_path) {
  const SkillScenario scenario = load_scenario(scenario_path);

  EngineConfig engine;
  engine.model = flags.model ? model_kind_from_string(*flags.model) : scenario.model;
  engine.params = resolve_params(flags, nlohmann::json::object());
  engine.player_pool = {scenario.players.begin(), scenario.players.end()};

  const SimResult result = run_simulation(scenario, engine, replications, seed);

  std::ostringstream plot;
  write_plot_data(plot, plot_data(result));
  write_text_file(out_path, plot.str());

  if (!log_out_path.empty()) {
    GameLog sample{scenario.model, result.sample_log};
    std::ostringstream log_text;
    write_game_log(log_text, sample);
    write_text_file(log_out_path, log_text.str());
  }

  // Summary: final aggregate ratings, the mean first-step drift the offset
  // experiments read off, and the long-run mean gap (average rating over the
  // second half of the horizon minus the final true skill). The gap is
  // reported only; ratings need not converge to the skill level.
  const double baseline = engine.model == ModelKind::EloClassic ? kEloClassicInitialRating
                                                                : engine.params.r_init;
  std::map<PlayerId, double> first_step_drift;
  for (const auto& history : result.replications) {
    const RatingVector after_first = history.after_step(1);
    for (const auto& [player, rating] : after_first.entries()) {
      first_step_drift[player] += rating - baseline;
    }
  }
  std::cout << "simulation: " << replications << " replications, " << scenario.horizon
            << " games, seed " << seed << ", rng " << result.rng_algorithm << "\n";
  std::cout << "player,final_mean,band_width,mean_first_step_drift,long_run_mean_gap\n";
  for (const auto& [player, points] : result.aggregate) {
    const AggregatePoint& last = points.back();
    double late_mean = 0.0;
    const std::size_t half = points.size() / 2;
    for (std::size_t t = half; t < points.size(); ++t) late_mean += points[t].mean;
    late_mean /= static_cast<double>(points.size() - half);
    const double final_skill = result.skills.at(player).back();
    char line[200];
    std::snprintf(line, sizeof(line), "%s,%.6f,%.6f,%.6f,%.6f\n", player.str().c_str(),
                  last.mean, last.band_high - last.band_low,
                  first_step_drift.at(player) / static_cast<double>(replications),
                  late_mean - final_skill);
    std::cout << line;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"score-driven rating engine: replay game logs, verify the score "
               "properties, and simulate skill scenarios"};
  app.require_subcommand(1);

  // rate
  auto* rate = app.add_subcommand("rate", "Replay a game log and print final ratings");
  std::string log_path, rate_config, rate_pool, rate_out, rate_history;
  ParamFlags rate_flags;
  rate->add_option("log", log_path, "Game log file")->required();
  rate->add_option("--config", rate_config, "JSON config (model, alpha, delta, k, r_init)");
  add_param_flags(rate, rate_flags,
                  "Rating model: win_loss, margin, win_draw_loss, ranking, elo_classic "
                  "(default: the log's #model header)");
  rate->add_option("--pool", rate_pool, "Pool file (one player per line); default: players in the log");
  rate->add_option("--out", rate_out, "Write the ratings table here instead of stdout");
  rate->add_option("--history", rate_history, "Write the full rating history (plot-data format)");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the score property suites");
  std::size_t verify_cases = 1000;
  std::uint64_t verify_seed = 1;
  std::optional<std::string> verify_model;
  std::string verify_out;
  bool inject_sign_flip = false;
  verify->add_option("--cases", verify_cases, "Case budget per family (default 1000)");
  verify->add_option("--seed", verify_seed, "RNG seed");
  verify->add_option("--model", verify_model, "Restrict to one score model");
  verify->add_option("--out", verify_out, "Also write the report to this file");
  verify->add_flag("--inject-sign-flip", inject_sign_flip)->group("");  // test hook, hidden

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation of a skill scenario");
  std::string scenario_path, sim_out, sim_log_out;
  int replications = 200;
  std::uint64_t sim_seed = 1;
  ParamFlags sim_flags;
  simulate->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  simulate->add_option("--replications", replications, "Independent replications (default 200)");
  simulate->add_option("--seed", sim_seed, "RNG seed");
  add_param_flags(simulate, sim_flags,
                  "Rating-engine model (default: the scenario's generator model); outcomes "
                  "are always sampled from the scenario model");
  simulate->add_option("--out", sim_out, "Plot-data output file")->required();
  simulate->add_option("--log-out", sim_log_out, "Write replication 0's game log here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (rate->parsed()) {
      return run_rate(log_path, rate_config, rate_flags, rate_pool, rate_out, rate_history);
    }
    if (verify->parsed()) {
      return run_verify(verify_cases, verify_seed, verify_model, inject_sign_flip, verify_out);
    }
    return run_simulate(scenario_path, replications, sim_seed, sim_flags, sim_out,
                        sim_log_out);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitValidation;
  }
}
