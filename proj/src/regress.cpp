#include "p2e/regress.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

#include "p2e/csv.hpp"
#include "p2e/error.hpp"

namespace p2e::regress {

namespace {

const char* const kColumnNames[] = {"intercept", "avg_trade_price", "circulation_rate"};

// Solves min ||X b - y|| and names the offending columns when X is rank deficient.
Eigen::VectorXd solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const std::vector<int>& columns) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < X.cols()) {
    // Columns beyond the rank in pivot order are the ones spanned by the others.
    std::string names;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = qr.rank(); k < X.cols(); ++k) {
      if (!names.empty()) names += ", ";
      names += kColumnNames[columns[static_cast<std::size_t>(perm[k])]];
    }
    throw FitError("fit_profit_model: design is rank deficient (rank " +
                   std::to_string(qr.rank()) + " of " + std::to_string(X.cols()) +
                   "); collinear columns: " + names +
                   " depend on the remaining columns");
  }
  return qr.solve(y);
}

}  // namespace

void GameAggregates::validate() const {
  if (!std::isfinite(avg_trade_price) || !std::isfinite(circulation_rate) ||
      !std::isfinite(mean_profit)) {
    throw DomainError("game aggregates must be finite");
  }
  if (circulation_rate < 0.0 || circulation_rate > 1.0) {
    throw DomainError("circulation_rate must lie in [0, 1]");
  }
}

double estimate_profit(const ProfitModelParams& p, const GameAggregates& g) {
  return p.alpha + p.beta * g.avg_trade_price + p.gamma * g.circulation_rate;
}

FitResult fit_profit_model(const std::vector<GameAggregates>& samples,
                           const std::optional<std::vector<double>>& gamma_grid) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  const Eigen::Index needed = gamma_grid ? 2 : 3;
  if (n < 3) throw DomainError("fit_profit_model: at least 3 samples are required");
  for (const auto& s : samples) s.validate();
  if (gamma_grid && gamma_grid->empty()) throw DomainError("fit_profit_model: empty gamma grid");

  Eigen::VectorXd y(n);
  Eigen::VectorXd price(n);
  Eigen::VectorXd circ(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    y(i) = s.mean_profit;
    price(i) = s.avg_trade_price;
    circ(i) = s.circulation_rate;
  }

  Eigen::MatrixXd X(n, needed);
  X.col(0).setOnes();
  X.col(1) = price;
  if (!gamma_grid) X.col(2) = circ;

  FitResult out;
  if (!gamma_grid) {
    const Eigen::VectorXd b = solve(X, y, {0, 1, 2});
    out.params = {b(0), b(1), b(2)};
  } else {
    out.gamma_from_grid = true;
    double best = std::numeric_limits<double>::infinity();
    for (double g : *gamma_grid) {
      if (!std::isfinite(g)) throw DomainError("fit_profit_model: gamma grid must be finite");
      const Eigen::VectorXd target = y - g * circ;
      const Eigen::VectorXd b = solve(X, target, {0, 1});
      const double ssr = (X * b - target).squaredNorm();
      if (ssr < best) {
        best = ssr;
        out.params = {b(0), b(1), g};
      }
    }
  }

  out.residuals.reserve(samples.size());
  for (const auto& s : samples) {
    const double r = s.mean_profit - estimate_profit(out.params, s);
    out.residuals.push_back(r);
    out.ssr += r * r;
  }
  return out;
}

std::vector<TableRow> read_model_table(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  const auto c_game = t.require_column("game");
  const auto c_alpha = t.require_column("alpha");
  const auto c_price = t.require_column("avg_trade_price");
  const auto c_beta = t.require_column("beta");
  const auto c_circ = t.require_column("circulation_rate");
  const auto c_gamma = t.require_column("gamma");
  const auto c_mean = t.require_column("mean_profit");
  const auto c_est = t.require_column("estimated_profit");

  std::vector<TableRow> rows;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    t.require_width(r);
    const auto& f = t.rows[r];
    const std::size_t line = r + 2;
    TableRow row;
    row.game = f[c_game];
    row.params.alpha = csv::parse_double(f[c_alpha], "alpha", line);
    row.params.beta = csv::parse_double(f[c_beta], "beta", line);
    row.params.gamma = csv::parse_double(f[c_gamma], "gamma", line);
    row.aggregates.avg_trade_price = csv::parse_double(f[c_price], "avg_trade_price", line);
    row.aggregates.circulation_rate = csv::parse_double(f[c_circ], "circulation_rate", line);
    if (!f[c_mean].empty()) {
      row.aggregates.mean_profit = csv::parse_double(f[c_mean], "mean_profit", line);
    }
    if (!f[c_est].empty()) {
      row.estimated_profit = csv::parse_double(f[c_est], "estimated_profit", line);
    }
    row.aggregates.validate();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string model_table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  out << "game,alpha,avg_trade_price,beta,circulation_rate,gamma,mean_profit,estimated_profit\n";
  for (const auto& r : rows) {
    out << r.game << ',' << csv::format_double(r.params.alpha) << ','
        << csv::format_double(r.aggregates.avg_trade_price) << ','
        << csv::format_double(r.params.beta) << ','
        << csv::format_double(r.aggregates.circulation_rate) << ','
        << csv::format_double(r.params.gamma) << ','
        << csv::format_double(r.aggregates.mean_profit) << ','
        << csv::format_double(estimate_profit(r.params, r.aggregates)) << '\n';
  }
  return out.str();
}

}  // namespace p2e::regress
