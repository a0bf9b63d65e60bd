#include "p2e/trade_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "p2e/csv.hpp"
#include "p2e/error.hpp"

namespace p2e::opt {

void BasicProfile::validate(std::optional<econ::PriceBounds> bounds) const {
  if (values.empty()) throw DomainError("profile '" + asset_id + "' is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError("profile '" + asset_id + "': value at t=" + std::to_string(i + 1) +
                        " must be finite and >= 0");
    }
    if (bounds && (v < bounds->lower || v > bounds->upper)) {
      throw DomainError("profile '" + asset_id + "': value at t=" + std::to_string(i + 1) +
                        " outside [L, U]");
    }
  }
}

double TradingPlan::realized(const BasicProfile& profile) const {
  double total = 0.0;
  for (std::size_t k = 0; k < buys.size() && k < sells.size(); ++k) {
    total += profile.at(sells[k]) - profile.at(buys[k]);
  }
  return total;
}

TradingPlan compute_opt(const BasicProfile& profile) {
  profile.validate();
  const auto& v = profile.values;
  const std::size_t n = v.size();

  TradingPlan plan;
  plan.asset_id = profile.asset_id;
  plan.opt.assign(n + 1, 0.0);

  // opt[t] is OPT(t); t is 1-based, v[t - 1] is v(t).
  for (std::size_t t = 2; t <= n; ++t) {
    double best = plan.opt[t - 1];
    double window_min = std::numeric_limits<double>::infinity();
    // Walk t' downward so the window [t', t) grows by one slot per step.
    for (std::size_t tp = t - 1; tp >= 1; --tp) {
      window_min = std::min(window_min, v[tp - 1]);
      best = std::max(best, plan.opt[tp] + (v[t - 1] - window_min));
    }
    plan.opt[t] = best;
  }
  plan.payoff = plan.opt[n];

  // Trading points: one pass over maximal rising stretches.
  std::size_t i = 0;
  while (i + 1 < n) {
    std::size_t buy = i;
    std::size_t j = i + 1;
    while (j < n && v[j] <= v[buy]) {
      if (v[j] < v[buy]) buy = j;
      ++j;
    }
    if (j == n) break;
    std::size_t sell = j++;
    while (j < n && v[j] >= v[sell]) {
      if (v[j] > v[sell]) sell = j;
      ++j;
    }
    plan.buys.push_back(static_cast<std::int64_t>(buy + 1));
    plan.sells.push_back(static_cast<std::int64_t>(sell + 1));
    i = sell;
  }
  return plan;
}

namespace {

double enumerate(const std::vector<double>& v, std::size_t t, bool holding, double acc) {
  if (t == v.size()) {
    return holding ? -std::numeric_limits<double>::infinity() : acc;
  }
  const double idle = enumerate(v, t + 1, holding, acc);
  const double act = holding ? enumerate(v, t + 1, false, acc + v[t])
                             : enumerate(v, t + 1, true, acc - v[t]);
  return std::max(idle, act);
}

}  // namespace

double brute_force_payoff(const BasicProfile& profile) {
  profile.validate();
  if (profile.T() > kBruteForceMaxT) {
    throw DomainError("brute_force_payoff: T=" + std::to_string(profile.T()) +
                      " exceeds the enumeration guard of " + std::to_string(kBruteForceMaxT));
  }
  return enumerate(profile.values, 0, false, 0.0);
}

double greedy_payoff(const BasicProfile& profile) {
  profile.validate();
  double total = 0.0;
  for (std::size_t t = 1; t < profile.values.size(); ++t) {
    total += std::max(0.0, profile.values[t] - profile.values[t - 1]);
  }
  return total;
}

std::vector<BasicProfile> read_profiles_csv(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  const auto col_id = table.require_column("asset_id");
  const auto col_t = table.require_column("t");
  const auto col_v = table.require_column("value");

  std::vector<BasicProfile> profiles;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string& id = row.at(col_id);
    const std::int64_t t = csv::parse_int(row.at(col_t), "t", r + 2);
    const double value = csv::parse_double(row.at(col_v), "value", r + 2);
    auto [it, inserted] = index.try_emplace(id, profiles.size());
    if (inserted) profiles.push_back(BasicProfile{id, {}});
    auto& profile = profiles[it->second];
    if (t != profile.T() + 1) {
      throw DomainError("profile '" + id + "': expected t=" + std::to_string(profile.T() + 1) +
                        " at line " + std::to_string(r + 2));
    }
    profile.values.push_back(value);
  }
  for (const auto& p : profiles) p.validate();
  return profiles;
}

void write_profiles_csv(const std::string& path, const std::vector<BasicProfile>& profiles) {
  std::ostringstream out;
  out << "asset_id,t,value\n";
  for (const auto& p : profiles) {
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      out << p.asset_id << ',' << (i + 1) << ',' << csv::format_double(p.values[i]) << '\n';
    }
  }
  csv::write_file_atomic(path, out.str());
}

}  // namespace p2e::opt
