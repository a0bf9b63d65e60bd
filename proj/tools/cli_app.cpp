#include "cli_app.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "p2e/csv.hpp"
#include "p2e/error.hpp"
#include "p2e/ledger.hpp"
#include "p2e/mechanism.hpp"
#include "p2e/regress.hpp"
#include "p2e/report_io.hpp"
#include "p2e/scenario_io.hpp"
#include "p2e/sim.hpp"
#include "p2e/trade_opt.hpp"

namespace p2e::cli {

namespace {

using io::Json;

enum class Level { Quiet = 0, Info = 1, Debug = 2 };

Level log_level() {
  const char* v = std::getenv("P2E_LOG");
  if (v == nullptr) return Level::Quiet;
  const std::string s(v);
  if (s == "debug") return Level::Debug;
  if (s == "info") return Level::Info;
  return Level::Quiet;
}

// Options every leaf command accepts.
struct Common {
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  bool paper_defaults = false;
};

// Economy overrides layered over a scenario or the defaults.
struct EconomyFlags {
  std::optional<std::int64_t> N, K, T;
  std::optional<double> c, f, C0, v0, L, U;

  void apply(econ::EconomyParams& p) const {
    if (N) p.N = *N;
    if (K) p.K = *K;
    if (T) p.T = *T;
    if (c) p.c = *c;
    if (f) p.f = *f;
    if (C0) p.C0 = *C0;
    if (v0) p.v0 = *v0;
    if (L) p.L = *L;
    if (U) p.U = *U;
  }

  Json to_json() const {
    Json j = Json::object();
    if (N) j["N"] = *N;
    if (K) j["K"] = *K;
    if (T) j["T"] = *T;
    if (c) j["c"] = *c;
    if (f) j["f"] = *f;
    if (C0) j["C0"] = *C0;
    if (v0) j["v0"] = *v0;
    if (L) j["L"] = *L;
    if (U) j["U"] = *U;
    return j;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Result file; stdout if omitted");
  cmd->add_option("--format", c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", c.seed, "RNG seed");
  cmd->add_flag("--paper-defaults", c.paper_defaults,
                "Use N=100, K=100, L=0, U=10000, T=12");
}

void add_economy(CLI::App* cmd, EconomyFlags& e) {
  cmd->add_option("--N", e.N, "Players");
  cmd->add_option("--K", e.K, "Assets");
  cmd->add_option("--T", e.T, "Slots");
  cmd->add_option("--c", e.c, "Demand constant");
  cmd->add_option("--f", e.f, "Holding benefit per slot");
  cmd->add_option("--C0", e.C0, "Development cost constant");
  cmd->add_option("--v0", e.v0, "Initial price");
  cmd->add_option("--L", e.L, "Price floor");
  cmd->add_option("--U", e.U, "Price cap");
}

void paper_defaults_into(econ::EconomyParams& p) {
  const auto d = econ::paper_defaults();
  p.N = d.N;
  p.K = d.K;
  p.L = d.L;
  p.U = d.U;
  p.T = d.T;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err), level_(log_level()) {}

  void log(Level at, const std::string& msg) const {
    if (level_ >= at) err_ << '[' << (at == Level::Debug ? "debug" : "info") << "] " << msg << '\n';
  }

  // Emits the result in the requested format and writes the manifest beside it.
  void emit(const Common& c, const std::string& command, const Json& json_doc,
            const std::string& csv_doc, const Json& inputs, const Json& params,
            std::optional<std::uint64_t> seed) const {
    const std::string body = c.format == "csv" ? csv_doc : json_doc.dump(2) + "\n";
    if (c.out.empty()) {
      out_ << body;
      return;
    }
    csv::write_file_atomic(c.out, body);
    Json manifest{{"tool", "p2e"},
                  {"version", kVersion},
                  {"command", command},
                  {"format", c.format},
                  {"output", c.out},
                  {"inputs", inputs},
                  {"seed", seed ? Json(*seed) : Json(nullptr)},
                  {"parameters", params},
                  {"created_utc", now_utc()}};
    io::write_json(c.out + ".manifest.json", manifest);
    log(Level::Info, "wrote " + c.out);
  }

 private:
  static std::string now_utc() {
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    return ledger::format_timestamp(now);
  }

  std::ostream& out_;
  std::ostream& err_;
  Level level_;
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Play-to-earn economy toolkit", "p2e"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  EconomyFlags econ_flags;
  Runner runner(out, err);
  std::function<void()> action;

  // opt points
  auto* opt_cmd = app.add_subcommand("opt", "Optimal trading points")->require_subcommand(1);
  std::string profile_path;
  auto* points = opt_cmd->add_subcommand("points", "Buy/sell slots and OPT for each profile");
  points->add_option("--profile", profile_path, "Profile CSV (asset_id,t,value)")->required();
  add_common(points, common);
  points->callback([&] {
    action = [&] {
      const auto profiles = opt::read_profiles_csv(profile_path);
      Json plans = Json::array();
      std::vector<opt::TradingPlan> list;
      for (const auto& p : profiles) {
        list.push_back(opt::compute_opt(p));
        plans.push_back(io::plan_to_json(list.back()));
      }
      runner.emit(common, "opt points", Json{{"plans", plans}}, io::plans_csv(list),
                  Json{{"profile", profile_path}}, Json::object(), std::nullopt);
    };
  });

  // mech incentives | equilibrium | probe
  auto* mech_cmd = app.add_subcommand("mech", "Incentive mechanism")->require_subcommand(1);
  auto* incentives = mech_cmd->add_subcommand("incentives", "Incentive schedule per profile");
  incentives->add_option("--profile", profile_path, "Profile CSV")->required();
  add_common(incentives, common);
  incentives->callback([&] {
    action = [&] {
      const auto profiles = opt::read_profiles_csv(profile_path);
      Json list = Json::array();
      std::vector<mech::IncentiveSchedule> schedules;
      for (const auto& p : profiles) {
        schedules.push_back(mech::incentive_schedule(p, opt::compute_opt(p)));
        list.push_back(io::schedule_to_json(schedules.back()));
      }
      runner.emit(common, "mech incentives", Json{{"schedules", list}},
                  io::schedules_csv(schedules), Json{{"profile", profile_path}},
                  Json::object(), std::nullopt);
    };
  });

  auto* equilibrium = mech_cmd->add_subcommand("equilibrium", "Check the all-BUY profile");
  equilibrium->add_option("--profile", profile_path, "Profile CSV")->required();
  add_common(equilibrium, common);
  add_economy(equilibrium, econ_flags);
  equilibrium->callback([&] {
    action = [&] {
      econ::EconomyParams params = econ::paper_defaults();
      econ_flags.apply(params);
      if (common.paper_defaults) paper_defaults_into(params);
      params.validate();
      const auto profiles = opt::read_profiles_csv(profile_path);
      Json reports = Json::array();
      std::ostringstream csv_out;
      csv_out << "asset_id,is_equilibrium,worst_deviation_gain,negative_incentives\n";
      for (const auto& p : profiles) {
        const auto sched = mech::incentive_schedule(p, opt::compute_opt(p));
        const auto rep = mech::equilibrium_check(p, sched, params);
        reports.push_back(io::equilibrium_to_json(p.asset_id, rep));
        csv_out << p.asset_id << ',' << (rep.is_equilibrium ? "true" : "false") << ','
                << csv::format_double(rep.worst_deviation_gain) << ','
                << rep.negative_incentives.size() << '\n';
      }
      runner.emit(common, "mech equilibrium", Json{{"reports", reports}}, csv_out.str(),
                  Json{{"profile", profile_path}}, econ_flags.to_json(), std::nullopt);
    };
  });

  mech::ProbeConfig probe_cfg;
  auto* probe = mech_cmd->add_subcommand("probe", "Best-response dynamics between sellers");
  probe->add_option("--sellers", probe_cfg.sellers, "1 or 2");
  probe->add_option("--v0", probe_cfg.v0, "Reservation price and ceiling");
  probe->add_option("--floor", probe_cfg.price_floor, "Lowest price");
  probe->add_option("--step", probe_cfg.undercut_step, "Undercut step");
  probe->add_option("--buyers", probe_cfg.buyers, "Buyers per round");
  probe->add_option("--stock", probe_cfg.stock_per_seller, "Units per seller");
  probe->add_option("--max-iters", probe_cfg.max_iters, "Best-response steps");
  add_common(probe, common);
  probe->callback([&] {
    action = [&] {
      if (common.paper_defaults) {
        probe_cfg.buyers = econ::paper_defaults().N;
        probe_cfg.stock_per_seller = econ::paper_defaults().K / std::max(1, probe_cfg.sellers);
      }
      const auto rep = mech::best_response_probe(probe_cfg);
      Json params{{"sellers", probe_cfg.sellers},     {"v0", probe_cfg.v0},
                  {"floor", probe_cfg.price_floor},   {"step", probe_cfg.undercut_step},
                  {"buyers", probe_cfg.buyers},       {"stock", probe_cfg.stock_per_seller},
                  {"max_iters", probe_cfg.max_iters}};
      runner.emit(common, "mech probe", io::probe_to_json(rep), io::probe_csv(rep),
                  Json::object(), params, std::nullopt);
    };
  });

  // sim run | calibrate
  auto* sim_cmd = app.add_subcommand("sim", "Economy simulation")->require_subcommand(1);
  std::string scenario_path;
  std::optional<std::int64_t> runs;
  std::optional<std::string> incentive;
  auto load_scenario = [&] {
    sim::Scenario s = io::read_scenario(scenario_path);
    econ_flags.apply(s.params);
    if (econ_flags.v0) s.v0_explicit = true;
    if (common.paper_defaults) paper_defaults_into(s.params);
    if (common.seed) s.seed = *common.seed;
    if (runs) s.runs = *runs;
    if (incentive) s.incentive_enabled = *incentive == "on";
    s.validate();
    runner.log(Level::Debug, "scenario " + io::scenario_to_json(s).dump());
    return s;
  };
  auto sim_params = [&] {
    Json p = econ_flags.to_json();
    if (runs) p["runs"] = *runs;
    if (incentive) p["incentive"] = *incentive;
    p["paper_defaults"] = common.paper_defaults;
    return p;
  };

  auto* run = sim_cmd->add_subcommand("run", "Monte-Carlo runs of a scenario");
  run->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  run->add_option("--runs", runs, "Override run count");
  run->add_option("--incentive", incentive, "on or off")->check(CLI::IsMember({"on", "off"}));
  add_common(run, common);
  add_economy(run, econ_flags);
  run->callback([&] {
    action = [&] {
      const sim::Scenario s = load_scenario();
      Json results = Json::array();
      std::string csv_doc;
      const auto summary = sim::monte_carlo(s);
      for (std::size_t i = 0; i < summary.seeds.size(); ++i) {
        const auto r = sim::simulate(s, summary.seeds[i]);
        results.push_back(io::run_result_to_json(r));
        const std::string row = io::run_result_csv(r);
        csv_doc += i == 0 ? row : row.substr(row.find('\n') + 1);
      }
      Json doc{{"scenario", io::scenario_to_json(s)},
               {"summary", io::summary_to_json(summary)},
               {"runs", results}};
      runner.emit(common, "sim run", doc, csv_doc, Json{{"scenario", scenario_path}},
                  sim_params(), s.seed);
    };
  });

  double target = 0.0;
  double tol = 0.02;
  double c_max = sim::kCMax;
  auto* calibrate = sim_cmd->add_subcommand("calibrate", "Fit c to a target mean profit");
  calibrate->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  calibrate->add_option("--target", target, "Target mean player profit")->required();
  calibrate->add_option("--tol", tol, "Relative tolerance");
  calibrate->add_option("--c-max", c_max, "Upper end of the search");
  calibrate->add_option("--runs", runs, "Override run count");
  add_common(calibrate, common);
  add_economy(calibrate, econ_flags);
  calibrate->callback([&] {
    action = [&] {
      sim::Scenario s = load_scenario();
      const auto res = sim::calibrate_c(s, target, tol, c_max);
      std::ostringstream csv_out;
      csv_out << "c,simulated_mean_profit,target_mean_profit,rel_error\n"
              << csv::format_double(res.c) << ',' << csv::format_double(res.simulated) << ','
              << csv::format_double(res.target) << ',' << csv::format_double(res.rel_error)
              << '\n';
      Json params = sim_params();
      params["target"] = target;
      params["tol"] = tol;
      params["c_max"] = c_max;
      runner.emit(common, "sim calibrate",
                  Json{{"scenario", s.name}, {"calibration", io::calibration_to_json(res)}},
                  csv_out.str(), Json{{"scenario", scenario_path}}, params, s.seed);
    };
  });

  // fit eval | run
  auto* fit_cmd = app.add_subcommand("fit", "Linear profit model")->require_subcommand(1);
  std::string table_path;
  auto* eval = fit_cmd->add_subcommand("eval", "Evaluate a model table");
  eval->add_option("--table", table_path, "Model table CSV")->required();
  add_common(eval, common);
  eval->callback([&] {
    action = [&] {
      const auto rows = regress::read_model_table(table_path);
      runner.emit(common, "fit eval", Json{{"rows", io::table_eval_to_json(rows)}},
                  regress::model_table_csv(rows), Json{{"table", table_path}}, Json::object(),
                  std::nullopt);
    };
  });

  std::string trades_path;
  std::string samples_path;
  std::int64_t bucket_days = 7;
  std::optional<std::string> game;
  std::vector<double> gamma_grid;
  auto* fit_run = fit_cmd->add_subcommand("run", "OLS fit on samples or bucketed trades");
  auto* src_trades = fit_run->add_option("--trades", trades_path, "Trades CSV");
  auto* src_samples = fit_run->add_option(
      "--samples", samples_path, "CSV with avg_trade_price,circulation_rate,mean_profit");
  src_trades->excludes(src_samples);
  fit_run->add_option("--bucket-days", bucket_days, "Window length for trades input");
  fit_run->add_option("--game", game, "Restrict trades to one game");
  fit_run->add_option("--gamma-grid", gamma_grid, "Candidate gamma values")->delimiter(',');
  add_common(fit_run, common);
  fit_run->callback([&] {
    action = [&] {
      std::vector<regress::GameAggregates> samples;
      Json inputs = Json::object();
      if (!trades_path.empty()) {
        auto l = ledger::ingest(trades_path);
        if (game) l = l.for_game(*game);
        samples = ledger::bucket_aggregates(l, bucket_days);
        inputs["trades"] = trades_path;
      } else if (!samples_path.empty()) {
        const auto t = csv::read_file(samples_path);
        const auto cp = t.require_column("avg_trade_price");
        const auto cc = t.require_column("circulation_rate");
        const auto cm = t.require_column("mean_profit");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
          t.require_width(r);
          samples.push_back({csv::parse_double(t.rows[r][cp], "avg_trade_price", r + 2),
                             csv::parse_double(t.rows[r][cc], "circulation_rate", r + 2),
                             csv::parse_double(t.rows[r][cm], "mean_profit", r + 2)});
        }
        inputs["samples"] = samples_path;
      } else {
        throw DomainError("fit run: one of --trades or --samples is required");
      }
      const auto fit = regress::fit_profit_model(
          samples, gamma_grid.empty() ? std::nullopt : std::optional(gamma_grid));
      Json doc = io::fit_to_json(fit);
      doc["samples"] = samples.size();
      std::ostringstream csv_out;
      csv_out << "alpha,beta,gamma,ssr,samples\n"
              << csv::format_double(fit.params.alpha) << ','
              << csv::format_double(fit.params.beta) << ','
              << csv::format_double(fit.params.gamma) << ',' << csv::format_double(fit.ssr)
              << ',' << samples.size() << '\n';
      Json params{{"bucket_days", bucket_days}, {"gamma_grid", gamma_grid}};
      if (game) params["game"] = *game;
      runner.emit(common, "fit run", doc, csv_out.str(), inputs, params, std::nullopt);
    };
  });

  // ledger analyze
  auto* ledger_cmd = app.add_subcommand("ledger", "Trade ledger analytics")->require_subcommand(1);
  std::int64_t horizon = ledger::kDefaultHorizon;
  auto* analyze = ledger_cmd->add_subcommand("analyze", "All ledger metrics");
  analyze->add_option("--trades", trades_path, "Trades CSV")->required();
  analyze->add_option("--game", game, "Restrict to one game");
  analyze->add_option("--horizon", horizon, "Re-stable horizon in days");
  add_common(analyze, common);
  analyze->callback([&] {
    action = [&] {
      auto l = ledger::ingest(trades_path);
      if (game) l = l.for_game(*game);
      runner.log(Level::Info, std::to_string(l.size()) + " trades, " +
                                  std::to_string(l.rejects().size()) + " rejects");
      const auto report = io::analyze_ledger(l, horizon);
      Json doc = io::ledger_report_to_json(report);
      Json rejects = Json::array();
      for (const auto& r : l.rejects()) {
        rejects.push_back({{"line", r.line}, {"reason", r.reason}, {"raw", r.raw}});
      }
      doc["reject_rows"] = rejects;
      Json params{{"horizon", horizon}};
      if (game) params["game"] = *game;
      runner.emit(common, "ledger analyze", doc, io::ledger_report_csv(report),
                  Json{{"trades", trades_path}}, params, std::nullopt);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n' << app.help();
    return 1;
  }

  if (!action) {
    err << "error: usage: no command selected\n" << app.help();
    return 1;
  }
  try {
    action();
    return 0;
  } catch (const IoError& e) {
    err << "error: " << error_kind(e) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << error_kind(e) << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace p2e::cli
