#include "p2e/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "p2e/error.hpp"

namespace p2e::mech {

IncentiveSchedule incentive_schedule(const opt::BasicProfile& profile,
                                     const opt::TradingPlan& plan) {
  profile.validate();
  const auto T = profile.T();
  if (static_cast<std::int64_t>(plan.opt.size()) != T + 1) {
    throw DomainError("incentive_schedule: plan has " + std::to_string(plan.opt.size()) +
                      " OPT entries for a profile of length " + std::to_string(T));
  }
  if (plan.buys.size() != plan.sells.size()) {
    throw DomainError("incentive_schedule: plan has unequal buy and sell counts");
  }

  IncentiveSchedule s;
  s.asset_id = profile.asset_id;
  s.w.assign(static_cast<std::size_t>(T), 0.0);
  s.buys = plan.buys;
  s.sells = plan.sells;
  s.opt = plan.opt;

  for (std::size_t k = 0; k < plan.buys.size(); ++k) {
    const std::int64_t x = plan.buys[k];
    const std::int64_t y = plan.sells[k];
    if (x < 1 || y > T || x >= y) throw DomainError("incentive_schedule: malformed plan span");
    s.incentivized.insert(x);
    s.incentivized.insert(y);
    const double gap = plan.opt[y] - plan.opt[x] - profile.at(y);
    for (std::int64_t mid = x + 1; mid < y; ++mid) {
      const double w = gap + profile.at(mid);
      s.w[static_cast<std::size_t>(mid - 1)] = w;
      if (std::abs(w) > econ::kAccountingTol) s.incentivized.insert(mid);
      if (w < -econ::kAccountingTol) s.negative.push_back(mid);
    }
  }
  return s;
}

double identity_residual(const opt::BasicProfile& profile, const IncentiveSchedule& schedule) {
  double worst = 0.0;
  for (std::size_t k = 0; k < schedule.buys.size(); ++k) {
    const std::int64_t x = schedule.buys[k];
    const std::int64_t y = schedule.sells[k];
    for (std::int64_t mid = x + 1; mid < y; ++mid) {
      const double lhs =
          schedule.opt[x] + (profile.at(y) - profile.at(mid) + schedule.at(mid));
      worst = std::max(worst, std::abs(lhs - schedule.opt[y]));
    }
  }
  return worst;
}

double expected_payoff(const opt::BasicProfile& profile, const std::set<std::int64_t>& Q,
                       std::span<const SlotPair> pairs, std::span<const std::int64_t> alpha,
                       const econ::EconomyParams& params,
                       const std::set<std::int64_t>& null_slots) {
  if (static_cast<std::int64_t>(alpha.size()) != profile.T()) {
    throw DomainError("expected_payoff: alpha must have one entry per slot");
  }
  const double bump = params.c / static_cast<double>(params.N);
  double total = 0.0;
  for (const auto& p : pairs) {
    if (p.buy < 1 || p.sell > profile.T() || p.sell <= p.buy) {
      throw DomainError("expected_payoff: each pair needs 1 <= buy < sell <= T");
    }
    if (!Q.contains(p.buy) || null_slots.contains(p.buy)) continue;
    const std::int64_t a = alpha[static_cast<std::size_t>(p.buy - 1)];
    if (a < 1) {
      throw DomainError("expected_payoff: alpha is 0 on bid slot " + std::to_string(p.buy));
    }
    total += (profile.at(p.sell) - profile.at(p.buy)) / static_cast<double>(a) + bump;
  }
  return total;
}

PlayerId allocate(std::span<const PlayerId> bidders, std::uint64_t seed) {
  if (bidders.empty()) throw DomainError("allocate: no bidders");
  if (bidders.size() == 1) return bidders.front();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, bidders.size() - 1);
  return bidders[pick(rng)];
}

EquilibriumReport equilibrium_check(const opt::BasicProfile& profile,
                                    const IncentiveSchedule& schedule,
                                    const econ::EconomyParams& params) {
  EquilibriumReport report;
  report.negative_incentives = schedule.negative;
  const double n = static_cast<double>(params.N);
  const double bump = params.c / n;

  for (std::size_t k = 0; k < schedule.buys.size(); ++k) {
    const std::int64_t x = schedule.buys[k];
    const std::int64_t y = schedule.sells[k];
    const double planned = schedule.opt[y] - schedule.opt[x];
    for (std::int64_t u = x; u < y; ++u) {
      if (!schedule.incentivized.contains(u)) continue;
      SlotDeviation d;
      d.slot = u;
      d.sell_slot = y;
      const double spread = profile.at(y) - profile.at(u) + schedule.at(u);
      // Symmetric all-BUY profile: alpha = N at every purchase slot.
      d.buy_payoff = spread / n + bump;
      d.null_gain = -d.buy_payoff;
      d.replan_gain = (planned - spread) / n;
      report.worst_deviation_gain =
          std::max({report.worst_deviation_gain, d.null_gain, d.replan_gain});
      report.deviations.push_back(d);
    }
  }
  report.is_equilibrium = report.worst_deviation_gain <= kEquilibriumTol;
  return report;
}

namespace {

struct ProbeMarket {
  const ProbeConfig& cfg;

  double price(std::int64_t level) const {
    return cfg.price_floor + static_cast<double>(level) * cfg.undercut_step;
  }

  // Units sold by seller `me` when sellers post the given price levels.
  double units(const std::vector<std::int64_t>& levels, std::size_t me) const {
    double demand = static_cast<double>(cfg.buyers);
    const double stock = static_cast<double>(cfg.stock_per_seller);
    std::vector<std::int64_t> distinct(levels.begin(), levels.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::int64_t level : distinct) {
      const auto group = static_cast<double>(std::count(levels.begin(), levels.end(), level));
      const double each = std::min(stock, demand / group);
      if (level == levels[me]) return each;
      demand = std::max(0.0, demand - each * group);
    }
    return 0.0;
  }

  std::int64_t best_response(std::vector<std::int64_t> levels, std::size_t me,
                             std::int64_t top) const {
    std::int64_t best = levels[me];
    double best_revenue = -1.0;
    // Scan from the top so ties resolve to the higher price.
    for (std::int64_t q = top; q >= 0; --q) {
      levels[me] = q;
      const double revenue = price(q) * units(levels, me);
      if (revenue > best_revenue) {
        best_revenue = revenue;
        best = q;
      }
    }
    return best;
  }
};

}  // namespace

ProbeReport best_response_probe(const ProbeConfig& cfg) {
  if (cfg.max_iters <= 0) throw DomainError("best_response_probe: max_iters must be >= 1");
  if (cfg.sellers < 1 || cfg.sellers > 2) {
    throw DomainError("best_response_probe: sellers must be 1 or 2");
  }
  if (!(cfg.undercut_step > 0.0)) {
    throw DomainError("best_response_probe: undercut_step must be > 0");
  }
  if (!(cfg.price_floor <= cfg.v0)) throw DomainError("best_response_probe: floor above v0");
  if (cfg.buyers < 1 || cfg.stock_per_seller < 1) {
    throw DomainError("best_response_probe: buyers and stock must be >= 1");
  }

  const ProbeMarket market{cfg};
  const auto top = static_cast<std::int64_t>(
      std::floor((cfg.v0 - cfg.price_floor) / cfg.undercut_step + 1e-9));
  const auto sellers = static_cast<std::size_t>(cfg.sellers);

  using Key = std::pair<std::vector<std::int64_t>, std::size_t>;
  std::vector<std::int64_t> levels(sellers, top);
  std::size_t mover = 0;
  std::map<Key, std::size_t> seen;
  std::vector<Key> history;

  auto to_state = [&](const Key& key) {
    ProbeState st;
    for (std::int64_t l : key.first) st.prices.push_back(market.price(l));
    st.next_mover = static_cast<int>(key.second);
    return st;
  };

  ProbeReport report;
  seen.emplace(Key{levels, mover}, 0);
  history.emplace_back(levels, mover);
  for (std::int64_t it = 1; it <= cfg.max_iters; ++it) {
    levels[mover] = market.best_response(levels, mover, top);
    mover = (mover + 1) % sellers;
    report.iterations = it;
    Key key{levels, mover};
    if (auto found = seen.find(key); found != seen.end()) {
      std::vector<Key> loop(history.begin() + static_cast<std::ptrdiff_t>(found->second),
                            history.end());
      const bool moving = std::any_of(loop.begin(), loop.end(), [&](const Key& k) {
        return k.first != loop.front().first;
      });
      report.cycled = moving;
      if (moving) {
        for (const auto& k : loop) report.cycle.push_back(to_state(k));
      }
      break;
    }
    seen.emplace(key, history.size());
    history.push_back(std::move(key));
  }
  for (const auto& k : history) report.trace.push_back(to_state(k));
  return report;
}

ProbeReport best_response_probe(const econ::EconomyParams& params, double price_floor,
                                double undercut_step, std::int64_t max_iters, int sellers) {
  if (price_floor < params.L) throw DomainError("best_response_probe: floor below L");
  ProbeConfig cfg;
  cfg.sellers = sellers;
  cfg.v0 = params.v0;
  cfg.price_floor = price_floor;
  cfg.undercut_step = undercut_step;
  cfg.buyers = params.N;
  cfg.stock_per_seller = std::max<std::int64_t>(1, params.K / std::max(1, sellers));
  cfg.max_iters = max_iters;
  return best_response_probe(cfg);
}

}  // namespace p2e::mech
