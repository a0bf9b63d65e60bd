#pragma once

#include <string>

#include <json.hpp>

#include "p2e/ledger.hpp"
#include "p2e/mechanism.hpp"
#include "p2e/regress.hpp"
#include "p2e/sim.hpp"
#include "p2e/trade_opt.hpp"

// JSON is the canonical report format. The *_csv functions are flat
// projections that keep only the headline columns.
namespace p2e::io {

using Json = nlohmann::ordered_json;

Json plan_to_json(const opt::TradingPlan& plan);
std::string plans_csv(const std::vector<opt::TradingPlan>& plans);

Json schedule_to_json(const mech::IncentiveSchedule& s);
std::string schedules_csv(const std::vector<mech::IncentiveSchedule>& schedules);

Json equilibrium_to_json(const std::string& asset_id, const mech::EquilibriumReport& r);
Json probe_to_json(const mech::ProbeReport& r);
std::string probe_csv(const mech::ProbeReport& r);

Json run_result_to_json(const sim::RunResult& r);
Json summary_to_json(const sim::MonteCarloSummary& s);
std::string run_result_csv(const sim::RunResult& r);
Json calibration_to_json(const sim::CalibrationResult& r);

Json fit_to_json(const regress::FitResult& r);
Json table_eval_to_json(const std::vector<regress::TableRow>& rows);

struct LedgerReport {
  std::size_t trades = 0;
  std::size_t rejects = 0;
  ledger::HoldingsSnapshot holdings;
  double odi = 0.0;
  double top1 = 0.0;
  double top10 = 0.0;
  ledger::IntervalSummary intervals;
  ledger::ProfitSummary profits;
  double circulation = 0.0;
  ledger::BigDay big_day;
  ledger::Restable restable;
};

/// Every metric of a non-empty ledger.
LedgerReport analyze_ledger(const ledger::TradeLedger& l, std::int64_t horizon);
Json ledger_report_to_json(const LedgerReport& r);
std::string ledger_report_csv(const LedgerReport& r);

/// Pretty-printed JSON plus trailing newline, written atomically.
void write_json(const std::string& path, const Json& doc);

}  // namespace p2e::io
