#include "p2e/report_io.hpp"

#include <sstream>

#include "p2e/csv.hpp"

namespace p2e::io {

Json plan_to_json(const opt::TradingPlan& plan) {
  return Json{{"asset_id", plan.asset_id},
              {"payoff", plan.payoff},
              {"buys", plan.buys},
              {"sells", plan.sells},
              {"opt", plan.opt}};
}

std::string plans_csv(const std::vector<opt::TradingPlan>& plans) {
  std::ostringstream out;
  out << "asset_id,payoff,buy,sell\n";
  for (const auto& p : plans) {
    for (std::size_t k = 0; k < p.buys.size(); ++k) {
      out << p.asset_id << ',' << csv::format_double(p.payoff) << ',' << p.buys[k] << ','
          << p.sells[k] << '\n';
    }
  }
  return out.str();
}

Json schedule_to_json(const mech::IncentiveSchedule& s) {
  Json slots = Json::array();
  for (std::size_t i = 0; i < s.w.size(); ++i) {
    slots.push_back({{"t", i + 1}, {"w", s.w[i]}});
  }
  return Json{{"asset_id", s.asset_id},
              {"slots", slots},
              {"incentivized", s.incentivized},
              {"negative", s.negative}};
}

std::string schedules_csv(const std::vector<mech::IncentiveSchedule>& schedules) {
  std::ostringstream out;
  out << "asset_id,t,w,incentivized\n";
  for (const auto& s : schedules) {
    for (std::size_t i = 0; i < s.w.size(); ++i) {
      const auto t = static_cast<std::int64_t>(i + 1);
      out << s.asset_id << ',' << t << ',' << csv::format_double(s.w[i]) << ','
          << (s.incentivized.contains(t) ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

Json equilibrium_to_json(const std::string& asset_id, const mech::EquilibriumReport& r) {
  Json devs = Json::array();
  for (const auto& d : r.deviations) {
    devs.push_back({{"slot", d.slot},
                    {"sell_slot", d.sell_slot},
                    {"buy_payoff", d.buy_payoff},
                    {"null_gain", d.null_gain},
                    {"replan_gain", d.replan_gain}});
  }
  return Json{{"asset_id", asset_id},
              {"is_equilibrium", r.is_equilibrium},
              {"worst_deviation_gain", r.worst_deviation_gain},
              {"negative_incentives", r.negative_incentives},
              {"deviations", devs}};
}

namespace {

Json states(const std::vector<mech::ProbeState>& xs) {
  Json out = Json::array();
  for (const auto& s : xs) out.push_back({{"prices", s.prices}, {"next_mover", s.next_mover}});
  return out;
}

Json stat(const sim::Stat& s) {
  return Json{{"mean", s.mean}, {"stdev", s.stdev}, {"ci95", s.ci95_half}};
}

}  // namespace

Json probe_to_json(const mech::ProbeReport& r) {
  return Json{{"cycled", r.cycled},
              {"iterations", r.iterations},
              {"cycle", states(r.cycle)},
              {"trace", states(r.trace)}};
}

std::string probe_csv(const mech::ProbeReport& r) {
  std::ostringstream out;
  out << "step,next_mover,prices\n";
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    out << i << ',' << r.trace[i].next_mover << ',';
    for (std::size_t k = 0; k < r.trace[i].prices.size(); ++k) {
      if (k) out << ';';
      out << csv::format_double(r.trace[i].prices[k]);
    }
    out << '\n';
  }
  return out.str();
}

Json run_result_to_json(const sim::RunResult& r) {
  return Json{{"rng_seed", r.rng_seed},
              {"mean_player_profit", r.mean_player_profit},
              {"platform_profit", r.platform_profit},
              {"player_trades", r.player_trades},
              {"total_player_profit", r.total_player_profit},
              {"mean_profit_per_player", r.mean_profit_per_player},
              {"player_profit_stdev", r.player_profit_stdev},
              {"platform_receipts", r.platform_receipts},
              {"player_outlay", r.player_outlay},
              {"platform_buybacks", r.platform_buybacks},
              {"incentives_paid", r.incentives_paid},
              {"max_price", r.max_price},
              {"releases", r.releases},
              {"prices", r.prices},
              {"per_asset_trades", r.per_asset_trades},
              {"alpha_trace", r.alpha_trace}};
}

std::string run_result_csv(const sim::RunResult& r) {
  std::ostringstream out;
  out << "rng_seed,mean_player_profit,platform_profit,player_trades,total_player_profit\n"
      << r.rng_seed << ',' << csv::format_double(r.mean_player_profit) << ','
      << csv::format_double(r.platform_profit) << ',' << r.player_trades << ','
      << csv::format_double(r.total_player_profit) << '\n';
  return out.str();
}

Json summary_to_json(const sim::MonteCarloSummary& s) {
  return Json{{"runs", s.runs},
              {"mean_player_profit", stat(s.mean_player_profit)},
              {"platform_profit", stat(s.platform_profit)},
              {"seeds", s.seeds}};
}

Json calibration_to_json(const sim::CalibrationResult& r) {
  return Json{{"c", r.c},
              {"simulated_mean_profit", r.simulated},
              {"target_mean_profit", r.target},
              {"rel_error", r.rel_error},
              {"evaluations", r.iterations}};
}

Json fit_to_json(const regress::FitResult& r) {
  return Json{{"model", "ols: profit ~ 1 + avg_trade_price + circulation_rate"},
              {"alpha", r.params.alpha},
              {"beta", r.params.beta},
              {"gamma", r.params.gamma},
              {"gamma_from_grid", r.gamma_from_grid},
              {"ssr", r.ssr},
              {"residuals", r.residuals}};
}

Json table_eval_to_json(const std::vector<regress::TableRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row{{"game", r.game},
             {"alpha", r.params.alpha},
             {"beta", r.params.beta},
             {"gamma", r.params.gamma},
             {"avg_trade_price", r.aggregates.avg_trade_price},
             {"circulation_rate", r.aggregates.circulation_rate},
             {"mean_profit", r.aggregates.mean_profit},
             {"estimated_profit", regress::estimate_profit(r.params, r.aggregates)}};
    if (r.estimated_profit) row["table_estimated_profit"] = *r.estimated_profit;
    out.push_back(row);
  }
  return out;
}

LedgerReport analyze_ledger(const ledger::TradeLedger& l, std::int64_t horizon) {
  LedgerReport r;
  r.trades = l.size();
  r.rejects = l.rejects().size();
  r.holdings = ledger::snapshot(l);
  r.odi = ledger::odi(r.holdings);
  r.top1 = ledger::top_concentration(r.holdings, 1);
  r.top10 = ledger::top_concentration(r.holdings, 10);
  r.intervals = ledger::inter_purchase_intervals(l);
  r.profits = ledger::profit_chains(l);
  r.circulation = ledger::circulation_rate(l);
  r.big_day = ledger::big_day(l);
  r.restable = ledger::price_restable(l, r.big_day, horizon);
  return r;
}

Json ledger_report_to_json(const LedgerReport& r) {
  Json restable{{"defined", r.restable.defined},
                {"big_day_average", r.restable.big_day_average},
                {"criterion", "min |rate - 1|"}};
  if (r.restable.defined) {
    restable["interval_days"] = r.restable.interval;
    restable["rate"] = r.restable.rate;
  }
  Json intervals{{"count", r.intervals.pooled.size()},
                 {"wallets", r.intervals.per_wallet.size()},
                 {"cdf_defined", r.intervals.cdf_defined}};
  if (r.intervals.cdf_defined) {
    intervals["mean_days"] = r.intervals.mean;
    intervals["median_days"] = r.intervals.median;
    intervals["stdev_days"] = r.intervals.stdev;
  }
  Json profits{{"traded_nfts", r.profits.traded_nft_count},
               {"player_trades", r.profits.player_trades},
               {"average", r.profits.average},
               {"median", r.profits.median},
               {"mode_rounding", "2 decimals"},
               {"developer_average", r.profits.developer_average},
               {"wins", r.profits.wins},
               {"losses_including_zero", r.profits.losses},
               {"average_trade_price", r.profits.average_trade_price}};
  profits["mode"] = r.profits.mode ? Json(*r.profits.mode) : Json(nullptr);
  return Json{{"trades", r.trades},
              {"rejects", r.rejects},
              {"holders", r.holdings.counts.size()},
              {"held_tokens", r.holdings.total()},
              {"odi", r.odi},
              {"odi_average_over", "wallets holding >= 1 token"},
              {"top1_share", r.top1},
              {"top10_share", r.top10},
              {"circulation_rate", r.circulation},
              {"big_day",
               {{"date", ledger::format_day(r.big_day.date)},
                {"count", r.big_day.count},
                {"share", r.big_day.share}}},
              {"price_restable", restable},
              {"intervals", intervals},
              {"profits", profits}};
}

std::string ledger_report_csv(const LedgerReport& r) {
  std::ostringstream out;
  out << "metric,value\n";
  auto row = [&](const char* name, double v) { out << name << ',' << csv::format_double(v) << '\n'; };
  row("trades", static_cast<double>(r.trades));
  row("rejects", static_cast<double>(r.rejects));
  row("odi", r.odi);
  row("top1_share", r.top1);
  row("top10_share", r.top10);
  row("circulation_rate", r.circulation);
  out << "big_day," << ledger::format_day(r.big_day.date) << '\n';
  row("big_day_count", static_cast<double>(r.big_day.count));
  row("big_day_share", r.big_day.share);
  if (r.restable.defined) {
    row("restable_interval_days", static_cast<double>(r.restable.interval));
    row("restable_rate", r.restable.rate);
  }
  if (r.intervals.cdf_defined) {
    row("interval_mean_days", r.intervals.mean);
    row("interval_median_days", r.intervals.median);
  }
  row("profit_average", r.profits.average);
  row("profit_median", r.profits.median);
  row("developer_average", r.profits.developer_average);
  return out.str();
}

void write_json(const std::string& path, const Json& doc) {
  csv::write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace p2e::io
