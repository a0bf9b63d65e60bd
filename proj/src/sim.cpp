#include "p2e/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "p2e/error.hpp"

namespace p2e::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b + 0x632BE59BD9B4E019ULL));
}

// Plan and schedule for one distinct profile.
struct AssetModel {
  opt::BasicProfile profile;
  mech::IncentiveSchedule schedule;
  std::set<std::int64_t> sells;
};

AssetModel model_for(const opt::BasicProfile& profile) {
  AssetModel m;
  m.profile = profile;
  const auto plan = opt::compute_opt(profile);
  m.schedule = mech::incentive_schedule(profile, plan);
  m.sells.insert(plan.sells.begin(), plan.sells.end());
  return m;
}

}  // namespace

void Scenario::validate() const {
  if (params.K < 1) throw DomainError("scenario: K must be >= 1");
  if (params.T < 1) throw DomainError("scenario: T must be >= 1");
  if (runs < 1) throw DomainError("scenario: runs must be >= 1");
  if (!std::isfinite(shock.sigma) || shock.sigma < 0.0) {
    throw DomainError("scenario: shock sigma must be finite and >= 0");
  }
  if (const auto* agg = std::get_if<AggregateProfile>(&profile)) {
    if (!std::isfinite(agg->sell_profit) || !std::isfinite(agg->trade_price) ||
        agg->sell_profit < 0.0 || agg->trade_price < 0.0) {
      throw DomainError("scenario: sell_profit and trade_price must be finite and >= 0");
    }
    if (params.T < 2) throw DomainError("scenario: aggregate profiles need T >= 2");
  } else {
    const auto& list = std::get<std::vector<opt::BasicProfile>>(profile);
    if (list.empty()) throw DomainError("scenario: explicit profile list is empty");
    if (list.size() != 1 && static_cast<std::int64_t>(list.size()) != params.K) {
      throw DomainError("scenario: need one shared profile or exactly K profiles");
    }
    for (const auto& p : list) {
      p.validate();
      if (p.T() != params.T) {
        throw DomainError("scenario: profile '" + p.asset_id + "' has length " +
                          std::to_string(p.T()) + ", expected T=" +
                          std::to_string(params.T));
      }
    }
  }
  resolved_params().validate();
}

std::vector<opt::BasicProfile> Scenario::profiles() const {
  if (const auto* agg = std::get_if<AggregateProfile>(&profile)) {
    return {build_basic_profile(agg->sell_profit, agg->trade_price, params.T)};
  }
  return std::get<std::vector<opt::BasicProfile>>(profile);
}

econ::EconomyParams Scenario::resolved_params() const {
  econ::EconomyParams p = params;
  if (!v0_explicit) {
    if (const auto* agg = std::get_if<AggregateProfile>(&profile)) {
      p.v0 = agg->sell_profit;
    } else {
      const auto& list = std::get<std::vector<opt::BasicProfile>>(profile);
      if (!list.empty() && !list.front().values.empty()) p.v0 = list.front().values.front();
    }
    p.v0 = std::clamp(p.v0, p.L, p.U);
  }
  return p;
}

opt::BasicProfile build_basic_profile(double sell_profit, double trade_price, std::int64_t T) {
  if (T < 2) throw DomainError("build_basic_profile: T must be >= 2");
  opt::BasicProfile p;
  p.asset_id = "asset";
  p.values.resize(static_cast<std::size_t>(T));
  const double step = (trade_price - sell_profit) / static_cast<double>(T - 1);
  for (std::int64_t t = 0; t < T; ++t) {
    p.values[static_cast<std::size_t>(t)] = sell_profit + step * static_cast<double>(t);
  }
  p.values.back() = trade_price;
  p.validate();
  return p;
}

RunResult simulate(const Scenario& scenario, std::uint64_t seed) {
  scenario.validate();
  const econ::EconomyParams params = scenario.resolved_params();
  const std::int64_t N = params.N;
  const std::int64_t K = params.K;
  const std::int64_t T = params.T;
  const auto Ku = static_cast<std::size_t>(K);
  const auto Tu = static_cast<std::size_t>(T);

  const auto source = scenario.profiles();
  std::vector<AssetModel> models;
  models.reserve(source.size());
  for (const auto& p : source) models.push_back(model_for(p));
  auto model = [&](std::size_t j) -> const AssetModel& {
    return models.size() == 1 ? models.front() : models[j];
  };

  RunResult r;
  r.rng_seed = seed;
  r.per_asset_trades.assign(Ku, 0);
  r.alpha_trace.assign(Tu, std::vector<std::int64_t>(Ku, 0));

  // Market prices m[t][j] for t = 1..T; a single shock per slot moves every asset.
  std::mt19937_64 shock_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> m(Tu + 1, std::vector<double>(Ku, 0.0));
  for (std::int64_t t = 1; t <= T; ++t) {
    double e = 0.0;
    if (scenario.shock.kind == ShockKind::Gaussian && scenario.shock.sigma > 0.0) {
      e = scenario.shock.sigma * gauss(shock_rng);
    }
    for (std::size_t j = 0; j < Ku; ++j) {
      econ::PriceState st;
      st.v_est = model(j).profile.at(t);
      st.shock = e;
      m[static_cast<std::size_t>(t)][j] = econ::next_price(st, params.bounds_for(j));
    }
  }

  // Primary market: slot 0 at v0, then the mean market price per slot.
  econ::PlatformBook book;
  std::vector<std::int64_t> available(Tu + 1, 0);
  std::int64_t released = 0;
  for (std::int64_t t = 0; t <= T; ++t) {
    const auto tu = static_cast<std::size_t>(t);
    double price = params.v0;
    if (t > 0) {
      price = std::accumulate(m[tu].begin(), m[tu].end(), 0.0) / static_cast<double>(K);
    }
    double est = price;
    if (scenario.estimator == EstimatorKind::LastDiff && t > 0) {
      est = price + (price - r.prices.back());
    }
    const std::int64_t k = econ::platform_release(t, released, price, est, params);
    released += k;
    if (released > K) throw StateError("simulate: cumulative releases exceed K");
    book.releases.push_back(k);
    book.prices.push_back(price);
    r.prices.push_back(price);
    available[tu] = released;
    r.max_price = t == 0 ? price : std::max(r.max_price, price);
  }
  r.releases = book.releases;
  r.platform_profit = econ::platform_profit(book, params);

  std::vector<mech::PlayerId> bidders(static_cast<std::size_t>(N));
  std::iota(bidders.begin(), bidders.end(), mech::PlayerId{0});
  std::vector<double> per_player(static_cast<std::size_t>(N), 0.0);

  struct Holding {
    mech::PlayerId owner = -1;
    double paid = 0.0;
    double bump = 0.0;
  };
  std::vector<Holding> holding(Ku);

  for (std::int64_t t = 1; t <= T; ++t) {
    const auto tu = static_cast<std::size_t>(t);
    // Positions opened last slot are sold back to the platform now.
    for (std::size_t j = 0; j < Ku; ++j) {
      auto& h = holding[j];
      if (h.owner < 0) continue;
      const double proceeds = m[tu][j];
      const double profit = proceeds - h.paid + params.f + h.bump;
      per_player[static_cast<std::size_t>(h.owner)] += profit;
      r.total_player_profit += profit;
      r.platform_buybacks += proceeds;
      ++r.player_trades;
      h = Holding{};
    }
    if (t == T) break;

    const auto open = static_cast<std::size_t>(available[tu]);
    for (std::size_t j = 0; j < open; ++j) {
      const AssetModel& am = model(j);
      const double w = scenario.incentive_enabled ? am.schedule.at(t) : 0.0;
      const double price = m[tu][j];
      const double bump = econ::traded_value(price, N, params) - price;
      const double gain = am.profile.at(t + 1) - am.profile.at(t) + w + bump + params.f;
      bool bid = gain > 0.0;
      if (scenario.incentive_enabled && am.schedule.incentivized.contains(t) &&
          !am.sells.contains(t)) {
        bid = true;
      }
      if (!bid) continue;

      r.alpha_trace[tu - 1][j] = N;
      const auto winner = mech::allocate(bidders, mix(seed, static_cast<std::uint64_t>(t) *
                                                                static_cast<std::uint64_t>(K) +
                                                            j));
      const double paid = price - w;
      holding[j] = Holding{winner, paid, bump};
      r.platform_receipts += paid;
      r.player_outlay += paid;
      r.incentives_paid += w;
      ++r.per_asset_trades[j];
    }
  }

  if (r.player_trades > 0) {
    r.mean_player_profit = r.total_player_profit / static_cast<double>(r.player_trades);
  }
  const Stat players = summarize(per_player);
  r.mean_profit_per_player = players.mean;
  r.player_profit_stdev = players.stdev;
  return r;
}

Stat summarize(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  const double n = static_cast<double>(xs.size());
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stdev = std::sqrt(ss / (n - 1.0));
  }
  s.ci95_half = 1.96 * s.stdev / std::sqrt(n);
  return s;
}

std::uint64_t run_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base + index);
}

MonteCarloSummary monte_carlo(const Scenario& scenario) {
  scenario.validate();
  MonteCarloSummary out;
  out.runs = scenario.runs;
  std::vector<double> player, platform;
  for (std::int64_t i = 0; i < scenario.runs; ++i) {
    const auto s = run_seed(scenario.seed, static_cast<std::uint64_t>(i));
    const RunResult r = simulate(scenario, s);
    out.seeds.push_back(s);
    player.push_back(r.mean_player_profit);
    platform.push_back(r.platform_profit);
  }
  out.mean_player_profit = summarize(player);
  out.platform_profit = summarize(platform);
  return out;
}

double mean_profit_at(const Scenario& scenario, double c) {
  Scenario s = scenario;
  s.params.c = c;
  return monte_carlo(s).mean_player_profit.mean;
}

CalibrationResult calibrate_c(const Scenario& scenario, double target, double tol,
                              double c_max) {
  if (scenario.incentive_enabled) {
    throw DomainError("calibrate_c: calibration runs without incentives");
  }
  if (!std::isfinite(target)) throw DomainError("calibrate_c: target must be finite");
  if (!(tol > 0.0)) throw DomainError("calibrate_c: tol must be > 0");
  if (!(c_max > 0.0) || !std::isfinite(c_max)) {
    throw DomainError("calibrate_c: c_max must be finite and > 0");
  }

  const double scale = target == 0.0 ? 1.0 : std::abs(target);
  auto rel = [&](double p) { return std::abs(p - target) / scale; };

  CalibrationResult best;
  best.target = target;
  auto consider = [&](double c, double p) {
    if (best.iterations == 0 || rel(p) < best.rel_error) {
      best.c = c;
      best.simulated = p;
      best.rel_error = rel(p);
    }
  };

  double lo = 0.0;
  double p_lo = mean_profit_at(scenario, lo);
  consider(lo, p_lo);
  best.iterations = 1;
  if (best.rel_error <= tol) return best;

  double hi = c_max;
  double p_hi = mean_profit_at(scenario, hi);
  consider(hi, p_hi);
  best.iterations = 2;
  if ((p_lo - target) * (p_hi - target) > 0.0) {
    throw CalibrationError("calibrate_c: target " + std::to_string(target) +
                               " not bracketed by c in [0, " + std::to_string(c_max) + "]",
                           lo, hi, p_lo, p_hi);
  }

  const bool rising = p_hi > p_lo;
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double p = mean_profit_at(scenario, mid);
    consider(mid, p);
    ++best.iterations;
    if ((p < target) == rising) {
      lo = mid;
      p_lo = p;
    } else {
      hi = mid;
      p_hi = p;
    }
  }
  if (best.rel_error > tol) {
    throw CalibrationError("calibrate_c: closest simulated profit " +
                               std::to_string(best.simulated) + " misses target " +
                               std::to_string(target),
                           lo, hi, p_lo, p_hi);
  }
  return best;
}

}  // namespace p2e::sim
