#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "p2e/regress.hpp"

namespace p2e::ledger {

using Instant = std::chrono::sys_seconds;
using Day = std::chrono::sys_days;

/// Parses `YYYY-MM-DDTHH:MM:SSZ`; nullopt on anything else.
std::optional<Instant> parse_timestamp(std::string_view text);
std::string format_timestamp(Instant t);
std::string format_day(Day d);
std::optional<Day> parse_day(std::string_view text);

struct TradeEvent {
  std::string game;
  std::string token_id;
  std::string seller;
  std::string buyer;
  double price_usd = 0.0;
  Instant timestamp{};
  std::size_t line = 0;  // 1-based line in the source file
};

struct Reject {
  std::size_t line = 0;
  std::string reason;
  std::string raw;
};

/// Validated trades, immutable after ingestion.
class TradeLedger {
 public:
  TradeLedger() = default;
  TradeLedger(std::vector<TradeEvent> events, std::vector<Reject> rejects);

  /// Sorted by (token_id, timestamp).
  const std::vector<TradeEvent>& events() const { return events_; }
  const std::vector<Reject>& rejects() const { return rejects_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  /// Half-open ranges into events(), one per token, in token order.
  struct Chain {
    std::string token_id;
    std::size_t begin = 0;
    std::size_t end = 0;
  };
  const std::vector<Chain>& chains() const { return chains_; }

  /// Seller of the token's first trade.
  const std::string& developer(const Chain& chain) const {
    return events_[chain.begin].seller;
  }

  /// Ledger restricted to one game; rejects are kept.
  TradeLedger for_game(std::string_view game) const;

 private:
  std::vector<TradeEvent> events_;
  std::vector<Reject> rejects_;
  std::vector<Chain> chains_;
};

/// Reads a trades CSV with header game,token_id,seller,buyer,price_usd,timestamp.
/// Bad rows go to rejects(); an unreadable file or missing column throws.
TradeLedger ingest(const std::string& path);
TradeLedger ingest_text(std::string_view text);

std::string rejects_csv(const TradeLedger& ledger);

struct HoldingsSnapshot {
  std::map<std::string, std::int64_t> counts;  // wallets holding >= 1 token

  std::int64_t total() const;
};

/// Owner of every token after its last trade at or before `at` (all trades if unset).
HoldingsSnapshot snapshot(const TradeLedger& ledger, std::optional<Instant> at = std::nullopt);

/// Largest holding over the mean holding of wallets with at least one token.
double odi(const HoldingsSnapshot& s);

/// Share of all held tokens owned by the n largest wallets; ties by wallet id.
double top_concentration(const HoldingsSnapshot& s, std::int64_t n);

struct IntervalSummary {
  std::map<std::string, std::vector<double>> per_wallet;  // days
  std::vector<double> pooled;                              // ascending
  double mean = 0.0;
  double median = 0.0;
  double stdev = 0.0;  // sample
  bool cdf_defined = false;
  /// Empirical CDF at pooled[i]: fraction of intervals <= pooled[i].
  std::vector<std::pair<double, double>> cdf;
};

IntervalSummary inter_purchase_intervals(const TradeLedger& ledger);

struct TradeProfit {
  std::string token_id;
  std::string wallet;  // the seller who realized the profit
  double profit = 0.0;
  bool developer = false;
  Instant timestamp{};
};

struct ProfitSummary {
  std::vector<TradeProfit> trades;  // in ledger order
  std::int64_t traded_nft_count = 0;
  std::int64_t player_trades = 0;
  double average = 0.0;        // over player (resale) profits
  double median = 0.0;
  std::optional<double> mode;  // on profits rounded to 2 decimals, smallest on ties
  double developer_average = 0.0;
  std::int64_t wins = 0;
  std::int64_t losses = 0;     // profit <= 0
  double average_trade_price = 0.0;
};

/// Developer sale: profit = price. Resale: price minus the previous price.
ProfitSummary profit_chains(const TradeLedger& ledger);

double circulation_rate(const TradeLedger& ledger);
double circulation_rate_from_counts(std::int64_t trades, std::int64_t traded_nfts);

struct BigDay {
  Day date{};
  std::int64_t count = 0;
  double share = 0.0;
};

BigDay big_day(const TradeLedger& ledger);

struct Restable {
  bool defined = false;
  std::int64_t interval = 0;
  double rate = 0.0;
  double big_day_average = 0.0;
  std::vector<std::pair<std::int64_t, double>> rates;  // (k, rate(k)) for days with data
};

inline constexpr std::int64_t kDefaultHorizon = 14;

/// Cumulative average price of days (bd, bd + k] over the big-day average;
/// picks k in 1..horizon minimizing |rate - 1|, earliest on ties.
Restable price_restable(const TradeLedger& ledger, const BigDay& bd,
                        std::int64_t horizon = kDefaultHorizon);

/// Splits the ledger into consecutive windows of `bucket_days` days starting at
/// the first trade's day and returns per-window (average trade price,
/// circulation rate, mean player profit). Windows without resales are skipped.
std::vector<regress::GameAggregates> bucket_aggregates(const TradeLedger& ledger,
                                                       std::int64_t bucket_days);

/// usd_per_token keyed by (date, token_symbol).
class RateTable {
 public:
  void add(Day date, std::string symbol, double usd_per_token);
  /// price_token * rate on the day; DomainError if the rate is missing.
  double to_usd(double price_token, std::string_view symbol, Instant when) const;
  std::size_t size() const { return rates_.size(); }

 private:
  std::map<std::pair<Day, std::string>, double> rates_;
};

/// Reads `date,token_symbol,usd_per_token`.
RateTable read_rates(const std::string& path);

}  // namespace p2e::ledger
