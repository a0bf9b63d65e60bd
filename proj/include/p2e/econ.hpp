#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace p2e::econ {

/// Absolute tolerance for accounting comparisons (currency units).
inline constexpr double kAccountingTol = 1e-9;

struct PriceBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Parameters of the P2E economy. Prices are abstract currency units.
struct EconomyParams {
  std::int64_t N = 100;  // players
  std::int64_t K = 100;  // assets
  std::int64_t T = 12;   // lifespan in slots
  double c = 0.0;        // rarity / demand constant
  double f = 0.0;        // per-slot holding benefit
  double C0 = 0.0;       // development cost constant (cost = C0 * K * f)
  double v0 = 0.0;       // initial price
  double L = 0.0;        // global price floor
  double U = 10000.0;    // global price cap

  // Optional per-asset bounds; empty means every asset uses [L, U].
  std::vector<PriceBounds> asset_bounds;

  /// Throws DomainError naming the first violated invariant.
  void validate() const;

  PriceBounds bounds_for(std::size_t asset) const;

  double development_cost() const { return C0 * static_cast<double>(K) * f; }
};

/// Baseline economy: N = K = 100, T = 12, L = 0, U = 10000.
EconomyParams paper_defaults();

/// Market price state of one slot.
struct PriceState {
  double v = 0.0;      // current price v_t
  double v_est = 0.0;  // market estimate of the next price v'_t
  double shock = 0.0;  // external shock e_t
};

/// v_{t+1} = v'_t + e_t, clamped into [lower, upper].
double next_price(const PriceState& s, const PriceBounds& bounds);

struct Position {
  std::int64_t buy_slot = 0;
  double buy_price = 0.0;
  std::optional<std::int64_t> sell_slot;
  std::optional<double> sell_price;

  bool closed() const { return sell_slot.has_value(); }
};

/// Primary-market ledger of the platform: k_t released at price v_t.
struct PlatformBook {
  std::vector<std::int64_t> releases;
  std::vector<double> prices;

  std::int64_t released() const;
};

enum class Action { Buy, Sell, Hold };

std::string_view to_string(Action a);

/// v * (1 + c * alpha / N).
double traded_value(double v, std::int64_t alpha, const EconomyParams& params);

/// Sign of v_est + f - v_t: Buy if positive, Sell if negative, Hold if zero.
Action player_decision(double v_t, double v_est, double f);

/// Number of assets the platform releases in slot t (0 <= t <= T).
///
/// Rising estimate: catch up to the cumulative quota floor((t+1)K/(T+1)).
/// Flat estimate: release the per-slot quota, floor((t+1)K/(T+1)) -
/// floor(tK/(T+1)), which carries the fractional remainder forward.
/// Falling estimate: hold. The result never pushes cumulative releases past K.
std::int64_t platform_release(std::int64_t t, std::int64_t released_so_far, double v_t,
                              double v_est, const EconomyParams& params);

/// Cumulative platform profit: sum(v_n * k_n) - C0 * K * f.
double platform_profit(const PlatformBook& book, const EconomyParams& params);

/// Cumulative player profit at slot t.
///
/// Closed positions contribute v_s - v_b + f(s - b); open positions are
/// carried at cost (-v_b) plus their accrued holding benefit f(t - b).
double player_profit(std::span<const Position> closed, std::span<const Position> open,
                     std::int64_t t, double f);

/// Upper bound on platform profit: k0 v0 + (K - k0) vmax - C0 K f.
double platform_max_profit(std::int64_t k0, double vmax, const EconomyParams& params);

}  // namespace p2e::econ
