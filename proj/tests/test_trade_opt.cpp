#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include "p2e/error.hpp"
#include "p2e/trade_opt.hpp"

using namespace p2e;
using namespace p2e::opt;

namespace {

BasicProfile prof(std::vector<double> v) { return BasicProfile{"a", std::move(v)}; }

// Independent oracle: every choice of disjoint (buy < sell) pairs.
double exhaustive(const std::vector<double>& v) {
  double best = 0;
  std::function<void(std::size_t, double)> go = [&](std::size_t from, double acc) {
    best = std::max(best, acc);
    for (std::size_t b = from; b < v.size(); ++b) {
      for (std::size_t s = b + 1; s < v.size(); ++s) go(s + 1, acc + v[s] - v[b]);
    }
  };
  go(0, 0);
  return best;
}

std::vector<double> random_profile(std::mt19937_64& rng, int max_t) {
  std::uniform_int_distribution<int> len(1, max_t), val(0, 100);
  std::vector<double> v(static_cast<std::size_t>(len(rng)));
  for (auto& x : v) x = val(rng);
  return v;
}

}  // namespace

TEST_CASE("compute_opt examples") {
  auto p = compute_opt(prof({5, 4, 3}));
  CHECK(p.payoff == 0);
  CHECK(p.buys.empty());
  CHECK(p.sells.empty());

  p = compute_opt(prof({1, 5}));
  CHECK(p.payoff == 4);
  CHECK(p.buys == std::vector<std::int64_t>{1});
  CHECK(p.sells == std::vector<std::int64_t>{2});

  p = compute_opt(prof({3, 1, 4, 1, 5}));
  CHECK(p.payoff == exhaustive({3, 1, 4, 1, 5}));
  CHECK(p.payoff == 7);
  CHECK(p.buys == std::vector<std::int64_t>{2, 4});
  CHECK(p.sells == std::vector<std::int64_t>{3, 5});
}

TEST_CASE("brute force and greedy examples") {
  CHECK(brute_force_payoff(prof({1, 5})) == 4);
  CHECK(brute_force_payoff(prof({3, 1, 4, 1, 5})) == 7);
  CHECK(brute_force_payoff(prof({2, 2, 2})) == 0);
  CHECK(greedy_payoff(prof({3, 1, 4, 1, 5})) == 0 + 3 + 0 + 4);
  CHECK(greedy_payoff(prof({5, 4, 3})) == 0);
  CHECK(greedy_payoff(prof({1, 2, 4})) == 1 + 2);
}

TEST_CASE("profile validation and guards") {
  CHECK_THROWS_AS(compute_opt(prof({})), DomainError);
  CHECK_THROWS_AS(compute_opt(prof({1, -2})), DomainError);
  CHECK_THROWS_AS(compute_opt(prof({1, std::nan("")})), DomainError);
  CHECK_THROWS_AS(prof({1, 20}).validate(econ::PriceBounds{0, 10}), DomainError);
  CHECK_THROWS_AS(brute_force_payoff(prof(std::vector<double>(kBruteForceMaxT + 1, 1.0))),
                  DomainError);
  CHECK(compute_opt(prof({7})).payoff == 0);
}

TEST_CASE("zero-gain round trips are not recorded and ties go to the earliest slot") {
  auto p = compute_opt(prof({2, 2, 2}));
  CHECK(p.buys.empty());
  p = compute_opt(prof({1, 1, 3, 3, 2}));
  CHECK(p.buys == std::vector<std::int64_t>{1});
  CHECK(p.sells == std::vector<std::int64_t>{3});
}

TEST_CASE("DP, brute force, greedy and the exhaustive oracle agree on 1000 profiles") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const auto v = random_profile(rng, 10);
    const auto plan = compute_opt(prof(v));
    const double oracle = exhaustive(v);
    REQUIRE(plan.payoff == oracle);
    CHECK(brute_force_payoff(prof(v)) == oracle);
    CHECK(greedy_payoff(prof(v)) == oracle);
    CHECK(plan.realized(prof(v)) == oracle);
  }
}

TEST_CASE("plan invariants") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 500; ++i) {
    const auto v = random_profile(rng, 14);
    const auto plan = compute_opt(prof(v));
    REQUIRE(plan.buys.size() == plan.sells.size());
    CHECK(plan.opt.size() == v.size() + 1);
    CHECK(plan.opt[0] == 0);
    for (std::size_t t = 1; t < plan.opt.size(); ++t) CHECK(plan.opt[t] >= plan.opt[t - 1]);
    std::int64_t last = 0;
    for (std::size_t k = 0; k < plan.buys.size(); ++k) {
      CHECK(plan.buys[k] > last);
      CHECK(plan.sells[k] > plan.buys[k]);
      last = plan.sells[k];
    }
    CHECK(plan.payoff >= 0);
    const bool non_increasing = std::is_sorted(v.rbegin(), v.rend());
    CHECK((plan.payoff == 0) == non_increasing);
  }
}

TEST_CASE("translation and scaling invariance") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto v = random_profile(rng, 12);
    const auto base = compute_opt(prof(v));
    auto shifted = v;
    for (auto& x : shifted) x += 37;
    const auto s = compute_opt(prof(shifted));
    CHECK(s.payoff == base.payoff);
    CHECK(s.buys == base.buys);
    CHECK(s.sells == base.sells);
    auto scaled = v;
    for (auto& x : scaled) x *= 4;
    const auto m = compute_opt(prof(scaled));
    CHECK(m.payoff == 4 * base.payoff);
    CHECK(m.buys == base.buys);
    CHECK(m.sells == base.sells);
  }
}

TEST_CASE("profiles CSV round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "p2e_opt_csv";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "profiles.csv").string();
  write_profiles_csv(path, {{"x", {1, 2.5, 3}}, {"y", {4, 1}}});
  const auto back = read_profiles_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].asset_id == "x");
  CHECK(back[0].values == std::vector<double>{1, 2.5, 3});
  CHECK(back[1].values == std::vector<double>{4, 1});

  std::ofstream(dir / "gap.csv") << "asset_id,t,value\nx,1,1\nx,3,2\n";
  CHECK_THROWS_AS(read_profiles_csv((dir / "gap.csv").string()), DomainError);
  std::ofstream(dir / "nocol.csv") << "asset,t,value\nx,1,1\n";
  CHECK_THROWS_AS(read_profiles_csv((dir / "nocol.csv").string()), IngestError);
  CHECK_THROWS_AS(read_profiles_csv((dir / "missing.csv").string()), IoError);
}
