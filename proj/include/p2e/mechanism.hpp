#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "p2e/econ.hpp"
#include "p2e/trade_opt.hpp"

namespace p2e::mech {

using PlayerId = std::int64_t;

/// Per-slot incentive amounts w(j, t) for one asset.
struct IncentiveSchedule {
  std::string asset_id;
  std::vector<double> w;                 // w[t - 1] is w(j, t)
  std::set<std::int64_t> incentivized;   // Q(j) = X u Y u {t : w != 0}
  std::vector<std::int64_t> buys;        // X(j) the schedule was built from
  std::vector<std::int64_t> sells;       // Y(j)
  std::vector<double> opt;               // OPT(t), t = 0..T
  std::vector<std::int64_t> negative;    // slots whose w came out < 0 (surcharges)

  double at(std::int64_t slot) const { return w.at(static_cast<std::size_t>(slot - 1)); }
};

/// Solves OPT(t') + (v(t) - v(t'') + w(t'')) = OPT(t) for every t'' strictly
/// between a buy slot t' and its following sell slot t. All other slots get 0.
/// Negative solutions are kept and listed in `negative`.
IncentiveSchedule incentive_schedule(const opt::BasicProfile& profile,
                                     const opt::TradingPlan& plan);

/// Largest |OPT(t') + v(t) - v(t'') + w(t'') - OPT(t)| over all intermediate slots.
double identity_residual(const opt::BasicProfile& profile, const IncentiveSchedule& schedule);

struct SlotPair {
  std::int64_t buy = 0;
  std::int64_t sell = 0;
};

/// Expected payoff W(i, j) of one player:
///   sum over pairs with buy slot in Q and not in `null_slots` of
///   (v(sell) - v(buy)) / alpha(buy) + c / N.
/// `alpha` is indexed by slot - 1. A pair whose buy slot the player leaves at
/// NULL contributes nothing.
double expected_payoff(const opt::BasicProfile& profile, const std::set<std::int64_t>& Q,
                       std::span<const SlotPair> pairs, std::span<const std::int64_t> alpha,
                       const econ::EconomyParams& params,
                       const std::set<std::int64_t>& null_slots = {});

/// Picks one winner uniformly among the bidders; a pure function of
/// (bidders, seed).
PlayerId allocate(std::span<const PlayerId> bidders, std::uint64_t seed);

struct SlotDeviation {
  std::int64_t slot = 0;
  std::int64_t sell_slot = 0;
  double buy_payoff = 0.0;   // expected payoff of BUY at this slot
  double null_gain = 0.0;    // payoff change from switching to NULL
  double replan_gain = 0.0;  // gain of relying on the plan's own buy slot instead
};

struct EquilibriumReport {
  bool is_equilibrium = true;
  double worst_deviation_gain = 0.0;
  std::vector<SlotDeviation> deviations;
  std::vector<std::int64_t> negative_incentives;
};

inline constexpr double kEquilibriumTol = 1e-9;

/// Checks the symmetric profile in which all N players BUY at every purchase
/// slot of Q(j) (X(j) and the incentivized slots) and sell at the span's sell
/// slot. For each such slot two unilateral deviations are scored: switching
/// to NULL (payoff 0) and skipping the slot in favour of the span's planned
/// buy, whose payoff is OPT(sell) - OPT(buy). Only single-slot deviations are
/// enumerated.
EquilibriumReport equilibrium_check(const opt::BasicProfile& profile,
                                    const IncentiveSchedule& schedule,
                                    const econ::EconomyParams& params);

struct ProbeConfig {
  int sellers = 2;          // 1 = platform alone, 2 = platform + mimicking player
  double v0 = 10.0;         // buyers' reservation price and the price ceiling
  double price_floor = 1.0;
  double undercut_step = 1.0;
  std::int64_t buyers = 10;
  std::int64_t stock_per_seller = 7;
  std::int64_t max_iters = 100;
};

struct ProbeState {
  std::vector<double> prices;  // posted price per seller
  int next_mover = 0;
};

struct ProbeReport {
  bool cycled = false;
  std::vector<ProbeState> cycle;  // the repeating stretch, empty if none
  std::vector<ProbeState> trace;  // every visited state, starting from all-at-v0
  std::int64_t iterations = 0;
};

/// Alternating best responses of sellers competing for the remaining buyers
/// on the price grid floor, floor + step, ..., v0. Each buyer takes one unit
/// from the cheapest seller with stock left; sellers at equal prices share
/// demand evenly. Reports a cycle when a state repeats with the prices moving
/// inside it; a repeated state with frozen prices is a fixed point.
ProbeReport best_response_probe(const ProbeConfig& config);

/// Probe driven by economy parameters: v0 and N buyers, the K assets split
/// evenly between the sellers.
ProbeReport best_response_probe(const econ::EconomyParams& params, double price_floor,
                                double undercut_step, std::int64_t max_iters,
                                int sellers = 2);

}  // namespace p2e::mech
