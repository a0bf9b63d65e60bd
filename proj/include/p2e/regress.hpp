#pragma once

#include <optional>
#include <string>
#include <vector>

namespace p2e::regress {

struct ProfitModelParams {
  double alpha = 0.0;  // intercept
  double beta = 0.0;   // price coefficient
  double gamma = 0.0;  // circulation coefficient
};

struct GameAggregates {
  double avg_trade_price = 0.0;
  double circulation_rate = 0.0;  // in [0, 1]
  double mean_profit = 0.0;       // observed mean profit, the fit target

  /// Throws DomainError if circulation_rate is outside [0, 1] or a field is non-finite.
  void validate() const;
};

/// alpha + beta * avg_trade_price + gamma * circulation_rate
double estimate_profit(const ProfitModelParams& p, const GameAggregates& g);

struct FitResult {
  ProfitModelParams params;
  std::vector<double> residuals;  // observed - estimated, one per sample
  double ssr = 0.0;
  bool gamma_from_grid = false;
};

/// Ordinary least squares over the design (1, price, circulation).
/// With a gamma grid, gamma is fixed to each grid value in turn, (alpha, beta)
/// are fitted on the remaining columns and the least-SSR grid point wins.
FitResult fit_profit_model(const std::vector<GameAggregates>& samples,
                           const std::optional<std::vector<double>>& gamma_grid = std::nullopt);

/// One row of a published model table.
struct TableRow {
  std::string game;
  ProfitModelParams params;
  GameAggregates aggregates;
  std::optional<double> estimated_profit;  // as printed in the table, if present
};

/// Columns: game,alpha,avg_trade_price,beta,circulation_rate,gamma,mean_profit,estimated_profit.
/// mean_profit and estimated_profit may be blank.
std::vector<TableRow> read_model_table(const std::string& path);

std::string model_table_csv(const std::vector<TableRow>& rows);

}  // namespace p2e::regress
