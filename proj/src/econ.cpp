#include "p2e/econ.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "p2e/error.hpp"

namespace p2e::econ {

namespace {

bool finite_non_negative(double x) { return std::isfinite(x) && x >= 0.0; }

// floor(num / den) for den > 0 and num >= 0.
std::int64_t quota(std::int64_t slot_plus_one, std::int64_t K, std::int64_t T) {
  return slot_plus_one * K / (T + 1);
}

}  // namespace

void EconomyParams::validate() const {
  if (N < 1) throw DomainError("N must be >= 1");
  if (K < 1) throw DomainError("K must be >= 1");
  if (T < 1) throw DomainError("T must be >= 1");
  if (!finite_non_negative(c)) throw DomainError("c must be finite and >= 0");
  if (!finite_non_negative(f)) throw DomainError("f must be finite and >= 0");
  if (!finite_non_negative(C0)) throw DomainError("C0 must be finite and >= 0");
  if (!std::isfinite(L) || !std::isfinite(U) || L > U) {
    throw DomainError("price bounds must satisfy L <= U");
  }
  if (!std::isfinite(v0) || v0 < L || v0 > U) {
    throw DomainError("v0 must lie in [L, U]");
  }
  for (const auto& b : asset_bounds) {
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || b.lower > b.upper) {
      throw DomainError("per-asset bounds must satisfy L(j) <= U(j)");
    }
  }
}

PriceBounds EconomyParams::bounds_for(std::size_t asset) const {
  if (asset < asset_bounds.size()) return asset_bounds[asset];
  return {L, U};
}

EconomyParams paper_defaults() {
  EconomyParams p;
  p.N = 100;
  p.K = 100;
  p.L = 0.0;
  p.U = 10000.0;
  p.T = 12;
  return p;
}

double next_price(const PriceState& s, const PriceBounds& bounds) {
  return std::clamp(s.v_est + s.shock, bounds.lower, bounds.upper);
}

std::int64_t PlatformBook::released() const {
  return std::accumulate(releases.begin(), releases.end(), std::int64_t{0});
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Buy:
      return "buy";
    case Action::Sell:
      return "sell";
    case Action::Hold:
      return "hold";
  }
  return "hold";
}

double traded_value(double v, std::int64_t alpha, const EconomyParams& params) {
  if (!finite_non_negative(v)) throw DomainError("traded_value: v must be >= 0");
  if (alpha < 0 || alpha > params.N) {
    throw DomainError("traded_value: alpha must lie in [0, N]");
  }
  if (!finite_non_negative(params.c)) throw DomainError("traded_value: c must be >= 0");
  const double share = static_cast<double>(alpha) / static_cast<double>(params.N);
  return v * (1.0 + params.c * share);
}

Action player_decision(double v_t, double v_est, double f) {
  const double margin = v_est + f - v_t;
  if (margin > 0.0) return Action::Buy;
  if (margin < 0.0) return Action::Sell;
  return Action::Hold;
}

std::int64_t platform_release(std::int64_t t, std::int64_t released_so_far, double v_t,
                              double v_est, const EconomyParams& params) {
  if (t < 0 || t > params.T) throw DomainError("platform_release: slot outside [0, T]");
  if (released_so_far < 0 || released_so_far > params.K) {
    throw StateError("platform_release: released_so_far outside [0, K]");
  }
  const std::int64_t remaining = params.K - released_so_far;
  std::int64_t want = 0;
  if (v_est > v_t) {
    want = quota(t + 1, params.K, params.T) - released_so_far;
  } else if (v_est == v_t) {
    want = quota(t + 1, params.K, params.T) - quota(t, params.K, params.T);
  }
  return std::clamp<std::int64_t>(want, 0, remaining);
}

double platform_profit(const PlatformBook& book, const EconomyParams& params) {
  if (book.releases.size() != book.prices.size()) {
    throw DomainError("platform_profit: releases and prices differ in length");
  }
  double revenue = 0.0;
  for (std::size_t n = 0; n < book.releases.size(); ++n) {
    revenue += book.prices[n] * static_cast<double>(book.releases[n]);
  }
  return revenue - params.development_cost();
}

double player_profit(std::span<const Position> closed, std::span<const Position> open,
                     std::int64_t t, double f) {
  double total = 0.0;
  for (const auto& p : closed) {
    if (!p.sell_slot || !p.sell_price) {
      throw DomainError("player_profit: closed position without sale");
    }
    if (*p.sell_slot <= p.buy_slot) {
      throw DomainError("player_profit: sell slot must follow buy slot");
    }
    if (*p.sell_slot > t) throw DomainError("player_profit: sale after current slot");
    total += *p.sell_price - p.buy_price +
             f * static_cast<double>(*p.sell_slot - p.buy_slot);
  }
  for (const auto& p : open) {
    if (p.closed()) throw DomainError("player_profit: open position carries a sale");
    if (p.buy_slot > t) throw DomainError("player_profit: purchase after current slot");
    total += -p.buy_price + static_cast<double>(t - p.buy_slot) * f;
  }
  return total;
}

double platform_max_profit(std::int64_t k0, double vmax, const EconomyParams& params) {
  if (k0 < 0 || k0 > params.K) throw DomainError("platform_max_profit: k0 outside [0, K]");
  if (vmax > params.U) throw DomainError("platform_max_profit: vmax above U");
  return static_cast<double>(k0) * params.v0 +
         static_cast<double>(params.K - k0) * vmax - params.development_cost();
}

}  // namespace p2e::econ
