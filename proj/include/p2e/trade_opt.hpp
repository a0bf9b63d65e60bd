#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "p2e/econ.hpp"

namespace p2e::opt {

/// Price series v(j, t) of one asset. values[0] is slot 1.
struct BasicProfile {
  std::string asset_id;
  std::vector<double> values;

  std::int64_t T() const { return static_cast<std::int64_t>(values.size()); }
  /// 1-based slot access.
  double at(std::int64_t slot) const { return values.at(static_cast<std::size_t>(slot - 1)); }

  /// Throws DomainError if empty, non-finite, negative, or outside bounds.
  void validate(std::optional<econ::PriceBounds> bounds = std::nullopt) const;
};

/// Optimal trading points for one asset.
struct TradingPlan {
  std::string asset_id;
  std::vector<double> opt;           // OPT(t) for t = 0..T
  std::vector<std::int64_t> buys;    // X(j), 1-based, ascending
  std::vector<std::int64_t> sells;   // Y(j), 1-based, ascending
  double payoff = 0.0;               // max_t OPT(t)

  /// Payoff recomputed from the (X, Y) pairs against a profile.
  double realized(const BasicProfile& profile) const;
};

/// Dynamic program over OPT(t) plus extraction of interleaved buy/sell slots.
///
/// OPT(t) is the best payoff achievable with every trade settled by the end of
/// slot t, so it is non-decreasing; the inner term is the usual
/// OPT(t') + v(t) - min_{t' <= t'' < t} v(t''). Buy slots are the earliest
/// minimum before each strict rise, sell slots the earliest maximum before
/// each strict fall; zero-gain round trips are never recorded.
TradingPlan compute_opt(const BasicProfile& profile);

/// Exhaustive maximum over all strictly interleaved buy/sell schedules.
/// Refuses profiles longer than kBruteForceMaxT.
double brute_force_payoff(const BasicProfile& profile);

inline constexpr std::int64_t kBruteForceMaxT = 16;

/// Sum of positive consecutive differences.
double greedy_payoff(const BasicProfile& profile);

/// Reads `asset_id,t,value` rows (t 1-based, contiguous per asset).
/// Assets come back in first-appearance order.
std::vector<BasicProfile> read_profiles_csv(const std::string& path);

void write_profiles_csv(const std::string& path, const std::vector<BasicProfile>& profiles);

}  // namespace p2e::opt
