#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "p2e/error.hpp"
#include "p2e/regress.hpp"

using namespace p2e;
using namespace p2e::regress;

TEST_CASE("estimate_profit examples") {
  const ProfitModelParams blnks{22.3, -0.56, 500};
  const GameAggregates g1{361, 0.395827901, 19.22};
  CHECK(estimate_profit(blnks, g1) == doctest::Approx(22.3 - 0.56 * 361 + 500 * 0.395827901));
  CHECK(std::abs(estimate_profit(blnks, g1) - 18.0540) <= 0.005);

  const ProfitModelParams ck{3.557, -0.002, 100};
  CHECK(std::abs(estimate_profit(ck, {35.57, 0.069904762, 0}) - 10.4763) <= 0.005);
  CHECK(estimate_profit(ck, {0, 0, 0}) == 3.557);
}

TEST_CASE("model table rows reproduce their estimated column") {
  const auto rows = read_model_table(P2E_DATA_DIR "/profit_model_table.csv");
  REQUIRE(rows.size() == 12);
  for (const auto& r : rows) {
    REQUIRE(r.estimated_profit.has_value());
    CHECK_MESSAGE(std::abs(estimate_profit(r.params, r.aggregates) - *r.estimated_profit) <= 0.005,
                  r.game);
    CHECK(r.params.beta < 0);
  }
}

TEST_CASE("estimate_profit is affine") {
  const ProfitModelParams p{4, -0.3, 250};
  const GameAggregates a{100, 0.2, 0}, b{400, 0.7, 0};
  for (double l : {0.0, 0.25, 0.5, 1.0}) {
    const GameAggregates mix{l * a.avg_trade_price + (1 - l) * b.avg_trade_price,
                             l * a.circulation_rate + (1 - l) * b.circulation_rate, 0};
    CHECK(estimate_profit(p, mix) ==
          doctest::Approx(l * estimate_profit(p, a) + (1 - l) * estimate_profit(p, b)));
  }
}

TEST_CASE("fit recovers exact linear data") {
  const ProfitModelParams truth{12.5, -0.04, 300};
  std::vector<GameAggregates> xs;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> price(10, 1000), circ(0, 1);
  for (int i = 0; i < 30; ++i) {
    GameAggregates g{price(rng), circ(rng), 0};
    g.mean_profit = estimate_profit(truth, g);
    xs.push_back(g);
  }
  const auto fit = fit_profit_model(xs);
  CHECK(fit.params.alpha == doctest::Approx(truth.alpha).epsilon(1e-9));
  CHECK(fit.params.beta == doctest::Approx(truth.beta).epsilon(1e-9));
  CHECK(fit.params.gamma == doctest::Approx(truth.gamma).epsilon(1e-9));
  for (double r : fit.residuals) CHECK(std::abs(r) < 1e-7);
  for (const auto& g : xs) CHECK(estimate_profit(fit.params, g) == doctest::Approx(g.mean_profit));
}

TEST_CASE("three samples in general position interpolate") {
  const std::vector<GameAggregates> xs{{10, 0.1, 5}, {50, 0.9, -3}, {200, 0.4, 11}};
  const auto fit = fit_profit_model(xs);
  for (double r : fit.residuals) CHECK(std::abs(r) < 1e-9);
}

TEST_CASE("parameter error shrinks like one over root n") {
  const ProfitModelParams truth{20, -0.5, 100};
  auto error_at = [&](int n) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> price(0, 100), circ(0, 1);
    std::normal_distribution<double> noise(0, 1);
    std::vector<GameAggregates> xs;
    for (int i = 0; i < n; ++i) {
      GameAggregates g{price(rng), circ(rng), 0};
      g.mean_profit = estimate_profit(truth, g) + noise(rng);
      xs.push_back(g);
    }
    const auto f = fit_profit_model(xs);
    return std::abs(f.params.gamma - truth.gamma) + std::abs(f.params.alpha - truth.alpha);
  };
  // Unit noise and uniform regressors put the gamma standard error near 3.5 / sqrt(n).
  CHECK(error_at(100) < 3.0);
  CHECK(error_at(10000) < 0.3);
  CHECK(error_at(1000000) < 0.03);
}

TEST_CASE("rank deficient designs are named") {
  const std::vector<GameAggregates> same_circ{{10, 0.3, 1}, {20, 0.3, 2}, {30, 0.3, 3}};
  try {
    fit_profit_model(same_circ);
    FAIL("expected FitError");
  } catch (const FitError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("rank deficient") != std::string::npos);
    CHECK((msg.find("intercept") != std::string::npos ||
           msg.find("circulation_rate") != std::string::npos));
  }
  CHECK_THROWS_AS(fit_profit_model({{1, 0.1, 1}, {2, 0.2, 2}}), DomainError);
  CHECK_THROWS_AS(fit_profit_model({{1, 1.5, 1}, {2, 0.2, 2}, {3, 0.3, 1}}), DomainError);
}

TEST_CASE("gamma grid picks the least-residual value") {
  const ProfitModelParams truth{5, -0.2, 400};
  std::vector<GameAggregates> xs;
  for (int i = 0; i < 12; ++i) {
    GameAggregates g{10.0 * i + 3, 0.05 * i + 0.02 * (i % 3), 0};
    g.mean_profit = estimate_profit(truth, g);
    xs.push_back(g);
  }
  const auto fit = fit_profit_model(xs, std::vector<double>{100, 200, 400, 800});
  CHECK(fit.gamma_from_grid);
  CHECK(fit.params.gamma == 400);
  CHECK(fit.params.alpha == doctest::Approx(5));
  CHECK(fit.ssr < 1e-12);
  CHECK_THROWS_AS(fit_profit_model(xs, std::vector<double>{}), DomainError);
}

TEST_CASE("model table CSV round trip") {
  const auto rows = read_model_table(P2E_DATA_DIR "/profit_model_table.csv");
  const auto path = std::filesystem::temp_directory_path() / "p2e_table.csv";
  std::ofstream(path) << model_table_csv(rows);
  const auto back = read_model_table(path.string());
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].game == rows[i].game);
    CHECK(back[i].params.alpha == rows[i].params.alpha);
    CHECK(*back[i].estimated_profit ==
          doctest::Approx(estimate_profit(rows[i].params, rows[i].aggregates)));
  }
}
