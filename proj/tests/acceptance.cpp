// Acceptance suite: runs every release criterion at its pinned tolerance and
// prints one pass/fail line each. Exits nonzero if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "scorelo/logio.hpp"
#include "scorelo/verify.hpp"

using namespace scorelo;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1;

struct CriterionResult {
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
  double limit_seconds;
};

std::vector<CriterionResult> g_results;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(const std::string& name, bool passed, const std::string& detail, double seconds,
            double limit_seconds) {
  const bool in_time = seconds < limit_seconds;
  g_results.push_back({name, passed && in_time, detail, seconds, limit_seconds});
  std::printf("[%2zu/10] %s  %-24s %s  (%.2fs, limit %.0fs)\n", g_results.size(),
              g_results.back().passed ? "PASS" : "FAIL", name.c_str(), detail.c_str(), seconds,
              limit_seconds);
  std::fflush(stdout);
}

std::string format(const char* fmt, ...) {
  char buffer[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buffer, sizeof(buffer), fmt, args);
  va_end(args);
  return buffer;
}

// conservation residuals collected while running criteria 1 and 6
double g_conservation_worst = 0.0;

void criterion_elo_equivalence() {
  Timer timer;
  const EloEquivalenceStats stats = elo_equivalence_stats(100, 200, 10, kSeed);
  g_conservation_worst = std::max(g_conservation_worst, stats.worst_mean_drift);
  report("elo-equivalence", stats.worst_deviation <= 1e-9,
         format("max |sd - classic| = %.3e (tol 1e-9)", stats.worst_deviation),
         timer.seconds(), 5.0);
}

void criterion_zero_expected_score() {
  Timer timer;
  VerifyOptions options;
  options.seed = kSeed;
  options.expected_score_vectors = 200;
  const PropertyReport r = check_zero_expected_score(options);
  report("zero-expected-score", r.passed,
         format("%zu vectors, worst |E[score]| = %.3e (tol 1e-8)", r.cases, r.worst_residual),
         timer.seconds(), 60.0);
}

void criterion_zero_sum() {
  Timer timer;
  VerifyOptions options;
  options.seed = kSeed;
  options.zero_sum_cases = 10000;
  const PropertyReport r = check_zero_sum(options);
  report("zero-sum", r.passed,
         format("%zu triples, worst |sum| = %.3e (tol 1e-12)", r.cases, r.worst_residual),
         timer.seconds(), 10.0);
}

void criterion_decreasing_score() {
  Timer timer;
  VerifyOptions options;
  options.seed = kSeed;
  const PropertyReport r = check_monotonicity(options);
  report("decreasing-score", r.passed,
         format("%zu sweeps over [-5,5], largest increment %.3e", r.cases, r.worst_residual),
         timer.seconds(), 5.0);
}

void criterion_gradient_correctness() {
  Timer timer;
  VerifyOptions options;
  options.seed = kSeed;
  options.fd_cases = 1000;
  const PropertyReport r = check_fd_agreement(options);
  report("gradient-correctness", r.passed,
         format("worst rel err %.3e (tol 1e-6); %s", r.worst_residual, r.note.c_str()),
         timer.seconds(), 10.0);
}

void criterion_reversion_sign() {
  Timer timer;
  bool all_ok = true;
  double worst_sigmas = 0.0;
  std::string failure;
  const double gaps[] = {-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0};
  for (ModelKind kind : {ModelKind::WinLoss, ModelKind::Margin, ModelKind::WinDrawLoss,
                         ModelKind::Ranking}) {
    for (double gap : gaps) {
      const ReversionCheck check = reversion_check(kind, gap, 500, kSeed);
      g_conservation_worst = std::max(g_conservation_worst, check.worst_mean_drift);
      if (!check.sign_ok) {
        all_ok = false;
        failure = format("sign mismatch %s gap %+.1f", to_string(kind).c_str(), gap);
      }
      const double sigmas = check.sim_sigma > 0.0
                                ? std::abs(check.sim_drift - check.predicted_drift) /
                                      check.sim_sigma
                                : 0.0;
      worst_sigmas = std::max(worst_sigmas, sigmas);
      if (sigmas > 3.0) {
        all_ok = false;
        failure = format("drift off by %.2f sigma, %s gap %+.1f", sigmas,
                         to_string(kind).c_str(), gap);
      }
    }
  }
  report("reversion-sign", all_ok,
         all_ok ? format("32 gap/model pairs; sim drift within %.2f sigma of K*E", worst_sigmas)
                : failure,
         timer.seconds(), 120.0);
}

void criterion_score_bounds() {
  Timer timer;
  VerifyOptions options;
  options.seed = kSeed;
  options.bounds_cases = 10000;
  const PropertyReport r = check_score_bounds(options);
  report("score-bounds", r.passed,
         format("%zu cases, largest violation %.3e (strict)", r.cases, r.worst_residual),
         timer.seconds(), 10.0);
}

void criterion_distribution_sanity() {
  Timer timer;
  SplitMix64 rng = substream(kSeed, 0xD157u);
  bool ok = true;
  std::string failure;

  // Plackett-Luce PMF sums to 1 over all m! permutations, m <= 6.
  double pl_worst = 0.0;
  for (std::size_t m = 2; m <= 6; ++m) {
    const auto players = test_players(m);
    for (int i = 0; i < 30; ++i) {
      const RatingVector ratings = random_case_ratings(rng, ModelKind::Ranking, players);
      const ModelParams params = random_case_params(rng, ModelKind::Ranking);
      const OutcomeSpace space = enumerate_outcomes(ModelKind::Ranking, players, ratings, params);
      double total = 0.0;
      for (const auto& [_, p] : space.outcomes) total += p;
      pl_worst = std::max(pl_worst, std::abs(total - 1.0));
    }
  }
  if (pl_worst > 1e-10) {
    ok = false;
    failure = format("PL normalization off by %.3e", pl_worst);
  }

  // Ordered-logit categories sum to 1.
  double wdl_worst = 0.0;
  const auto pair = test_players(2);
  for (int i = 0; i < 1000; ++i) {
    const RatingVector ratings = random_case_ratings(rng, ModelKind::WinDrawLoss, pair);
    const ModelParams params = random_case_params(rng, ModelKind::WinDrawLoss);
    double total = 0.0;
    for (WdlResult result : {WdlResult::AWins, WdlResult::Draw, WdlResult::BWins}) {
      total += std::exp(
          wdl_log_likelihood(ratings, WinDrawLoss(pair[0], pair[1], result), params));
    }
    wdl_worst = std::max(wdl_worst, std::abs(total - 1.0));
  }
  if (wdl_worst > 1e-12) {
    ok = false;
    failure = format("ordered-logit normalization off by %.3e", wdl_worst);
  }

  // Skellam truncated mass reaches 1 within 1e-12.
  double mass_worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const RatingVector ratings = random_case_ratings(rng, ModelKind::Margin, pair);
    const ModelParams params = random_case_params(rng, ModelKind::Margin);
    const OutcomeSpace space =
        enumerate_outcomes(ModelKind::Margin, {pair[0], pair[1]}, ratings, params);
    double total = 0.0;
    for (const auto& [_, p] : space.outcomes) total += p;
    mass_worst = std::max(mass_worst, std::abs(total - 1.0));
  }
  if (mass_worst > 1e-12) {
    ok = false;
    failure = format("skellam truncated mass off by %.3e", mass_worst);
  }

  // Skellam sampling moments: mean 2 sinh, variance 2 cosh, 3-sigma bounds.
  double moments_worst_sigma = 0.0;
  const ModelParams params{};
  for (double diff : {0.0, 0.7}) {
    const RatingVector skills({{pair[0], diff}, {pair[1], 0.0}});
    const int draws = 100000;
    double sum = 0.0;
    double sum_squares = 0.0;
    for (int i = 0; i < draws; ++i) {
      const auto outcome = std::get<Margin>(
          sample_outcome(ModelKind::Margin, {pair[0], pair[1]}, skills, params, rng));
      const double d = static_cast<double>(outcome.difference());
      sum += d;
      sum_squares += d * d;
    }
    const double mean = sum / draws;
    const double variance = sum_squares / draws - mean * mean;
    const double expected_mean = 2.0 * std::sinh(diff);
    const double expected_var = 2.0 * std::cosh(diff);
    // se(mean) = sqrt(var/n); se(sample var) from the Skellam fourth cumulant
    const double mean_se = std::sqrt(expected_var / draws);
    const double var_se =
        std::sqrt((2.0 * expected_var * expected_var + expected_var) / draws);
    const double mean_sigmas = std::abs(mean - expected_mean) / mean_se;
    const double var_sigmas = std::abs(variance - expected_var) / var_se;
    moments_worst_sigma = std::max({moments_worst_sigma, mean_sigmas, var_sigmas});
  }
  if (moments_worst_sigma > 3.0) {
    ok = false;
    failure = format("skellam sample moments off by %.2f sigma", moments_worst_sigma);
  }

  report("distribution-sanity", ok,
         ok ? format("PL %.1e, wdl %.1e, mass %.1e, moments %.2f sigma", pl_worst, wdl_worst,
                     mass_worst, moments_worst_sigma)
            : failure,
         timer.seconds(), 30.0);
}

void criterion_conservation() {
  // residuals were accumulated while replaying criterion 1 and simulating
  // criterion 6; both keep per-time mean rating at r_init
  report("conservation", g_conservation_worst <= 1e-10,
         format("worst |mean - r_init| = %.3e (tol 1e-10)", g_conservation_worst), 0.0,
         1.0);
}

int run_cli(const std::string& args) {
  const std::string command = std::string(SCORELO_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(command.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

void criterion_cli_round_trip() {
  Timer timer;
  bool ok = true;
  std::string failure;

  const fs::path dir =
      fs::temp_directory_path() / ("scorelo-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);

  // simulator-emitted logs for every model must rate cleanly
  for (ModelKind kind : {ModelKind::WinLoss, ModelKind::Margin, ModelKind::WinDrawLoss,
                         ModelKind::Ranking}) {
    SkillScenario scenario;
    scenario.players = {PlayerId("u"), PlayerId("v"), PlayerId("w")};
    double level = 0.5;
    for (const auto& p : scenario.players) {
      scenario.skills.emplace(p, ConstantSkill{level});
      level -= 0.5;
    }
    scenario.model = kind;
    scenario.horizon = 50;
    if (kind == ModelKind::Ranking) {
      scenario.pairing = PairingPolicy::FullFieldRanking;
      scenario.ranking_field_size = 3;
    }
    EngineConfig config;
    config.model = kind;
    config.player_pool = {scenario.players.begin(), scenario.players.end()};
    const SimResult result = run_simulation(scenario, config, 1, kSeed);

    const fs::path log_path = dir / (to_string(kind) + ".log");
    std::ofstream out(log_path);
    write_game_log(out, GameLog{kind, result.sample_log});
    out.close();
    if (run_cli("rate " + log_path.string()) != 0) {
      ok = false;
      failure = "simulated " + to_string(kind) + " log failed to rate";
    }
  }

  // verify exits 0 as shipped, nonzero under the sign-flip hook
  if (run_cli("verify --cases 100 --seed 5") != 0) {
    ok = false;
    failure = "verify failed on the shipped build";
  }
  const int mutated = run_cli("verify --cases 100 --seed 5 --inject-sign-flip");
  if (mutated == 0) {
    ok = false;
    failure = "verify passed under the sign-flip mutation";
  }

  report("cli-round-trip", ok, ok ? "4 simulated logs rated; verify 0/nonzero as required" : failure,
         timer.seconds(), 10.0);
}

}  // namespace

int main() {
  std::printf("acceptance suite (seed %llu)\n", static_cast<unsigned long long>(kSeed));
  criterion_elo_equivalence();
  criterion_zero_expected_score();
  criterion_zero_sum();
  criterion_decreasing_score();
  criterion_gradient_correctness();
  criterion_reversion_sign();
  criterion_score_bounds();
  criterion_distribution_sanity();
  criterion_conservation();
  criterion_cli_round_trip();

  std::size_t passed = 0;
  for (const auto& r : g_results) passed += r.passed ? 1 : 0;
  std::printf("result: %zu/%zu criteria passed\n", passed, g_results.size());
  return passed == g_results.size() ? 0 : 1;
}
