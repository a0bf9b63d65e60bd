#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "p2e/error.hpp"
#include "p2e/mechanism.hpp"

using namespace p2e;
using namespace p2e::mech;

namespace {

opt::BasicProfile prof(std::vector<double> v) { return {"a", std::move(v)}; }

IncentiveSchedule schedule_for(const opt::BasicProfile& p) {
  return incentive_schedule(p, opt::compute_opt(p));
}

econ::EconomyParams params(std::int64_t N, double c) {
  econ::EconomyParams e;
  e.N = N;
  e.c = c;
  return e;
}

}  // namespace

TEST_CASE("incentive_schedule examples") {
  const auto a = schedule_for(prof({1, 2, 4}));
  // OPT(3) - OPT(1) - v(3) + v(2)
  CHECK(a.at(2) == doctest::Approx(3.0 - 0.0 - 4.0 + 2.0));
  CHECK(a.at(1) == 0);
  CHECK(a.at(3) == 0);
  CHECK(a.incentivized == std::set<std::int64_t>{1, 2, 3});

  const auto b = schedule_for(prof({5, 4, 3}));
  CHECK(std::all_of(b.w.begin(), b.w.end(), [](double w) { return w == 0; }));
  CHECK(b.incentivized.empty());

  const auto c = schedule_for(prof({1, 1, 4}));
  CHECK(c.at(2) == doctest::Approx(3.0 - 0.0 - 4.0 + 1.0));
  CHECK(c.incentivized == std::set<std::int64_t>{1, 3});
}

TEST_CASE("negative incentives are kept and flagged") {
  const auto s = schedule_for(prof({2, 5, 3, 6}));
  CHECK(s.negative.empty());
  // A hand-made plan with one long span and a lowered OPT(4) yields a surcharge.
  opt::TradingPlan plan = opt::compute_opt(prof({2, 5, 3, 6}));
  plan.buys = {1};
  plan.sells = {4};
  const auto forced = incentive_schedule(prof({2, 5, 3, 6}), plan);
  // w(t'') = OPT(4) - OPT(1) - v(4) + v(t'') = 6 - 0 - 6 + v(t'')
  CHECK(forced.at(2) == doctest::Approx(5));
  CHECK(forced.at(3) == doctest::Approx(3));
  plan.opt[4] = 1;
  const auto neg = incentive_schedule(prof({2, 5, 3, 6}), plan);
  CHECK(neg.at(3) == doctest::Approx(1 - 6 + 3.0));
  CHECK(neg.negative == std::vector<std::int64_t>{3});
}

TEST_CASE("incentive_schedule rejects mismatched plans") {
  auto plan = opt::compute_opt(prof({1, 2, 4}));
  CHECK_THROWS_AS(incentive_schedule(prof({1, 2}), plan), DomainError);
  plan.sells.clear();
  CHECK_THROWS_AS(incentive_schedule(prof({1, 2, 4}), plan), DomainError);
}

TEST_CASE("identity and path independence on 500 random profiles") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_real_distribution<double> val(0, 100);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    for (auto& x : v) x = val(rng);
    const auto p = prof(v);
    const auto plan = opt::compute_opt(p);
    const auto s = incentive_schedule(p, plan);
    for (std::size_t k = 0; k < plan.buys.size(); ++k) {
      const auto x = plan.buys[k], y = plan.sells[k];
      CHECK(s.at(x) == 0);
      CHECK(s.at(y) == 0);
      for (auto mid = x + 1; mid < y; ++mid) {
        CHECK(std::abs(plan.opt[x] + (p.at(y) - p.at(mid) + s.at(mid)) - plan.opt[y]) <= 1e-9);
        // Buying at the effective price v - w and selling at y matches the plan.
        const double effective = p.at(mid) - s.at(mid);
        CHECK(std::abs(plan.opt[x] + p.at(y) - effective - plan.opt[y]) <= 1e-9);
      }
    }
    CHECK(identity_residual(p, s) <= 1e-9);
    CHECK(equilibrium_check(p, s, params(10, 0.5)).is_equilibrium);
  }
}

TEST_CASE("expected_payoff examples") {
  const auto p = prof({2, 5});
  const std::set<std::int64_t> Q{1, 2};
  const std::vector<SlotPair> pairs{{1, 2}};
  const std::vector<std::int64_t> one{1, 0};
  CHECK(expected_payoff(p, Q, pairs, one, params(1, 0)) == doctest::Approx(3));
  const std::vector<std::int64_t> four{4, 0};
  CHECK(expected_payoff(p, Q, pairs, four, params(100, 0.8)) ==
        doctest::Approx(3.0 / 4.0 + 0.8 / 100.0));
  CHECK(expected_payoff(p, Q, pairs, four, params(100, 0.8), {1}) == 0);
  CHECK(expected_payoff(p, {2}, pairs, four, params(100, 0.8)) == 0);
}

TEST_CASE("expected_payoff with alpha = N adds exactly c/N per pair") {
  const auto p = prof({2, 5, 1, 9});
  const std::vector<SlotPair> pairs{{1, 2}, {3, 4}};
  const std::vector<std::int64_t> alpha(4, 20);
  const double w = expected_payoff(p, {1, 3}, pairs, alpha, params(20, 0.6));
  CHECK(w == doctest::Approx((3.0 + 8.0) / 20.0 + 2 * 0.6 / 20.0));
}

TEST_CASE("expected_payoff errors") {
  const auto p = prof({2, 5});
  const std::vector<SlotPair> pairs{{1, 2}};
  const std::vector<std::int64_t> zero{0, 0};
  CHECK_THROWS_AS(expected_payoff(p, {1}, pairs, zero, params(4, 0)), DomainError);
  const std::vector<std::int64_t> short_alpha{1};
  CHECK_THROWS_AS(expected_payoff(p, {1}, pairs, short_alpha, params(4, 0)), DomainError);
  const std::vector<SlotPair> bad{{2, 1}};
  const std::vector<std::int64_t> one{1, 1};
  CHECK_THROWS_AS(expected_payoff(p, {2}, bad, one, params(4, 0)), DomainError);
}

TEST_CASE("allocate is deterministic and uniform") {
  const std::vector<PlayerId> single{42};
  CHECK(allocate(single, 123) == 42);
  const std::vector<PlayerId> four{1, 2, 3, 4};
  CHECK(allocate(four, 99) == allocate(four, 99));
  CHECK_THROWS_AS(allocate(std::vector<PlayerId>{}, 1), DomainError);

  std::map<PlayerId, int> freq;
  constexpr int kDraws = 100000;
  for (int s = 0; s < kDraws; ++s) ++freq[allocate(four, static_cast<std::uint64_t>(s))];
  for (PlayerId id : four) {
    CHECK(static_cast<double>(freq[id]) / kDraws == doctest::Approx(0.25).epsilon(0.04));
  }
}

TEST_CASE("equilibrium_check examples") {
  const auto p = prof({1, 2, 4});
  const auto s = schedule_for(p);
  const auto ok = equilibrium_check(p, s, params(3, 0.5));
  CHECK(ok.is_equilibrium);
  CHECK(ok.worst_deviation_gain <= kEquilibriumTol);

  auto zeroed = s;
  zeroed.w[1] = 0;  // slot 2 still in Q, so the all-slots profile bids there
  const auto bad = equilibrium_check(p, zeroed, params(3, 0.5));
  CHECK_FALSE(bad.is_equilibrium);
  CHECK(bad.worst_deviation_gain > 0);

  const auto flat = prof({2, 2, 2});
  CHECK(equilibrium_check(flat, schedule_for(flat), params(3, 0.5)).is_equilibrium);
}

TEST_CASE("best_response_probe canonical instance cycles") {
  ProbeConfig cfg;
  const auto r = best_response_probe(cfg);
  CHECK(r.cycled);
  CHECK(r.iterations <= 100);
  REQUIRE_FALSE(r.cycle.empty());
  double lo = 1e9, hi = 0;
  for (const auto& st : r.cycle) {
    for (double p : st.prices) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
  }
  CHECK(hi == cfg.v0);
  CHECK(lo < cfg.v0);

  econ::EconomyParams e;
  e.N = 10;
  e.K = 14;
  e.v0 = 10;
  CHECK(best_response_probe(e, 1, 1, 100).cycled);
}

TEST_CASE("best_response_probe controls") {
  ProbeConfig one;
  one.sellers = 1;
  const auto mono = best_response_probe(one);
  CHECK_FALSE(mono.cycled);
  CHECK(mono.cycle.empty());
  CHECK(mono.trace.front().prices.front() == one.v0);

  ProbeConfig short_run;
  short_run.max_iters = 1;
  const auto s = best_response_probe(short_run);
  CHECK_FALSE(s.cycled);
  CHECK(s.cycle.empty());
}

TEST_CASE("best_response_probe validation") {
  ProbeConfig c;
  c.max_iters = 0;
  CHECK_THROWS_AS(best_response_probe(c), DomainError);
  c = ProbeConfig{};
  c.sellers = 3;
  CHECK_THROWS_AS(best_response_probe(c), DomainError);
  c = ProbeConfig{};
  c.undercut_step = 0;
  CHECK_THROWS_AS(best_response_probe(c), DomainError);
  c = ProbeConfig{};
  c.price_floor = 11;
  CHECK_THROWS_AS(best_response_probe(c), DomainError);
  econ::EconomyParams e;
  e.L = 2;
  e.v0 = 10;
  CHECK_THROWS_AS(best_response_probe(e, 1, 1, 10), DomainError);
}
