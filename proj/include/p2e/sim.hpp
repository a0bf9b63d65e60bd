#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "p2e/econ.hpp"
#include "p2e/mechanism.hpp"
#include "p2e/trade_opt.hpp"

namespace p2e::sim {

enum class ShockKind { None, Gaussian };
enum class EstimatorKind { Martingale, LastDiff };

struct ShockSpec {
  ShockKind kind = ShockKind::None;
  double sigma = 0.0;
};

/// Per-game aggregates a basic profile is interpolated from.
struct AggregateProfile {
  double sell_profit = 0.0;  // developer's average first-sale price, v(1)
  double trade_price = 0.0;  // average trade price, v(T)
};

using ProfileSource = std::variant<AggregateProfile, std::vector<opt::BasicProfile>>;

struct Scenario {
  std::string name;
  econ::EconomyParams params = econ::paper_defaults();
  // When false, v0 is taken from the first slot of the (first) profile.
  bool v0_explicit = false;
  ProfileSource profile = AggregateProfile{};
  bool incentive_enabled = false;
  ShockSpec shock;
  EstimatorKind estimator = EstimatorKind::Martingale;
  std::uint64_t seed = 0;
  std::int64_t runs = 1;

  /// Throws DomainError on an infeasible scenario.
  void validate() const;

  /// One profile per asset (size K) or a single shared profile.
  std::vector<opt::BasicProfile> profiles() const;

  /// params with v0 resolved.
  econ::EconomyParams resolved_params() const;
};

struct RunResult {
  double mean_player_profit = 0.0;   // average realized profit per player trade
  double platform_profit = 0.0;      // primary-market profit, sum(v_t k_t) - C0 K f
  std::vector<std::int64_t> per_asset_trades;
  std::vector<std::vector<std::int64_t>> alpha_trace;  // [slot - 1][asset]
  std::uint64_t rng_seed = 0;

  std::int64_t player_trades = 0;
  double total_player_profit = 0.0;
  double mean_profit_per_player = 0.0;  // total_player_profit / N
  double player_profit_stdev = 0.0;     // across players
  double platform_receipts = 0.0;       // paid to the platform by buying players
  double player_outlay = 0.0;           // paid by players, tracked per player
  double platform_buybacks = 0.0;
  double incentives_paid = 0.0;
  double max_price = 0.0;               // realized price maximum, slot 0 included
  std::vector<std::int64_t> releases;   // k_t for t = 0..T
  std::vector<double> prices;           // market price for t = 0..T
};

/// Linear interpolation from sell_profit at t = 1 to trade_price at t = T.
opt::BasicProfile build_basic_profile(double sell_profit, double trade_price, std::int64_t T);

/// One Monte-Carlo path of the economy.
///
/// Slot 0 is the pre-launch release at v0. In slots 1..T the platform keeps
/// releasing per econ::platform_release against the estimator's forecast, and
/// every released asset is offered once per slot. Players know the basic
/// profile; all N bid for an asset at slot t < T when the expected return of
/// holding it for one slot is positive,
///     v(t+1) - v(t) + w(t) + (traded_value - v)(t) + f > 0,
/// and, with incentives on, at every purchase slot of Q(j). The winner pays
/// the market price minus w, receives the traded-value bump as incentive NFTs,
/// and sells back to the platform at the next slot's market price.
RunResult simulate(const Scenario& scenario, std::uint64_t seed);

struct Stat {
  double mean = 0.0;
  double stdev = 0.0;       // sample standard deviation, 0 for one run
  double ci95_half = 0.0;   // 1.96 * stdev / sqrt(runs)
};

struct MonteCarloSummary {
  std::int64_t runs = 0;
  Stat mean_player_profit;
  Stat platform_profit;
  std::vector<std::uint64_t> seeds;
};

/// Seed of run `index` derived from the scenario seed.
std::uint64_t run_seed(std::uint64_t base, std::uint64_t index);

MonteCarloSummary monte_carlo(const Scenario& scenario);

Stat summarize(const std::vector<double>& xs);

inline constexpr double kCMax = 4.0;

struct CalibrationResult {
  double c = 0.0;
  double simulated = 0.0;
  double target = 0.0;
  double rel_error = 0.0;
  int iterations = 0;
};

/// Bisection on c in [0, c_max] until the mean simulated player profit (over
/// scenario.runs seeds) is within `tol` relative error of the target.
CalibrationResult calibrate_c(const Scenario& scenario, double target_mean_profit,
                              double tol, double c_max = kCMax);

/// Mean of mean_player_profit over the scenario's runs at a given c.
double mean_profit_at(const Scenario& scenario, double c);

}  // namespace p2e::sim
