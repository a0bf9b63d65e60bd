#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "p2e/error.hpp"
#include "p2e/ledger.hpp"

namespace p2e::ledger {

namespace {

using std::chrono::days;
using std::chrono::floor;

double median_of_sorted(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

std::int64_t HoldingsSnapshot::total() const {
  std::int64_t t = 0;
  for (const auto& [wallet, n] : counts) t += n;
  return t;
}

HoldingsSnapshot snapshot(const TradeLedger& ledger, std::optional<Instant> at) {
  HoldingsSnapshot s;
  const auto& ev = ledger.events();
  for (const auto& chain : ledger.chains()) {
    const TradeEvent* last = nullptr;
    for (std::size_t i = chain.begin; i < chain.end; ++i) {
      if (at && ev[i].timestamp > *at) break;
      last = &ev[i];
    }
    if (last) ++s.counts[last->buyer];
  }
  return s;
}

double odi(const HoldingsSnapshot& s) {
  if (s.counts.empty()) throw DomainError("odi: snapshot has no holders");
  std::int64_t largest = 0;
  for (const auto& [wallet, n] : s.counts) largest = std::max(largest, n);
  const double average = static_cast<double>(s.total()) / static_cast<double>(s.counts.size());
  return static_cast<double>(largest) / average;
}

double top_concentration(const HoldingsSnapshot& s, std::int64_t n) {
  if (n < 1) throw DomainError("top_concentration: n must be >= 1");
  if (s.counts.empty()) throw DomainError("top_concentration: snapshot has no holders");
  std::vector<std::pair<std::string, std::int64_t>> ranked(s.counts.begin(), s.counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const auto take = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(n));
  std::int64_t top = 0;
  for (std::size_t i = 0; i < take; ++i) top += ranked[i].second;
  return static_cast<double>(top) / static_cast<double>(s.total());
}

IntervalSummary inter_purchase_intervals(const TradeLedger& ledger) {
  std::map<std::string, std::vector<Instant>> purchases;
  for (const auto& e : ledger.events()) purchases[e.buyer].push_back(e.timestamp);

  IntervalSummary out;
  for (auto& [wallet, times] : purchases) {
    if (times.size() < 2) continue;
    std::sort(times.begin(), times.end());
    auto& gaps = out.per_wallet[wallet];
    for (std::size_t i = 1; i < times.size(); ++i) {
      const double d = static_cast<double>((times[i] - times[i - 1]).count()) / 86400.0;
      gaps.push_back(d);
      out.pooled.push_back(d);
    }
  }
  std::sort(out.pooled.begin(), out.pooled.end());
  if (out.pooled.empty()) return out;

  out.mean = mean_of(out.pooled);
  out.median = median_of_sorted(out.pooled);
  if (out.pooled.size() > 1) {
    double ss = 0.0;
    for (double x : out.pooled) ss += (x - out.mean) * (x - out.mean);
    out.stdev = std::sqrt(ss / static_cast<double>(out.pooled.size() - 1));
  }
  out.cdf_defined = true;
  const double n = static_cast<double>(out.pooled.size());
  for (std::size_t i = 0; i < out.pooled.size(); ++i) {
    if (i + 1 < out.pooled.size() && out.pooled[i + 1] == out.pooled[i]) continue;
    out.cdf.emplace_back(out.pooled[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

ProfitSummary profit_chains(const TradeLedger& ledger) {
  ProfitSummary out;
  const auto& ev = ledger.events();
  std::vector<double> player;
  std::vector<double> developer;
  double price_sum = 0.0;
  for (const auto& chain : ledger.chains()) {
    for (std::size_t i = chain.begin; i < chain.end; ++i) {
      const bool dev = i == chain.begin;
      TradeProfit p;
      p.token_id = ev[i].token_id;
      p.wallet = ev[i].seller;
      p.developer = dev;
      p.timestamp = ev[i].timestamp;
      p.profit = dev ? ev[i].price_usd : ev[i].price_usd - ev[i - 1].price_usd;
      price_sum += ev[i].price_usd;
      if (dev) {
        developer.push_back(p.profit);
      } else {
        player.push_back(p.profit);
        // Zero-profit resales are tallied as losses.
        if (p.profit > 0.0) {
          ++out.wins;
        } else {
          ++out.losses;
        }
      }
      out.trades.push_back(std::move(p));
    }
  }
  out.traded_nft_count = static_cast<std::int64_t>(ledger.chains().size());
  out.player_trades = static_cast<std::int64_t>(player.size());
  out.average = mean_of(player);
  out.developer_average = mean_of(developer);
  if (!ev.empty()) out.average_trade_price = price_sum / static_cast<double>(ev.size());

  std::map<long long, std::int64_t> cents;
  for (double p : player) ++cents[std::llround(p * 100.0)];
  std::int64_t best = 0;
  for (const auto& [c, n] : cents) {
    if (n > best) {
      best = n;
      out.mode = static_cast<double>(c) / 100.0;
    }
  }
  std::sort(player.begin(), player.end());
  out.median = median_of_sorted(player);
  return out;
}

double circulation_rate_from_counts(std::int64_t trades, std::int64_t traded_nfts) {
  if (trades < 1) throw DomainError("circulation_rate: no trades");
  if (traded_nfts < 1 || traded_nfts > trades) {
    throw DomainError("circulation_rate: traded NFTs must lie in [1, trades]");
  }
  return static_cast<double>(trades - traded_nfts) / static_cast<double>(trades);
}

double circulation_rate(const TradeLedger& ledger) {
  if (ledger.empty()) throw DomainError("circulation_rate: empty ledger");
  return circulation_rate_from_counts(static_cast<std::int64_t>(ledger.size()),
                                      static_cast<std::int64_t>(ledger.chains().size()));
}

BigDay big_day(const TradeLedger& ledger) {
  if (ledger.empty()) throw DomainError("big_day: empty ledger");
  std::map<Day, std::int64_t> per_day;
  for (const auto& e : ledger.events()) ++per_day[floor<days>(e.timestamp)];
  BigDay bd;
  for (const auto& [d, n] : per_day) {
    if (n > bd.count) {
      bd.date = d;
      bd.count = n;
    }
  }
  bd.share = static_cast<double>(bd.count) / static_cast<double>(ledger.size());
  return bd;
}

Restable price_restable(const TradeLedger& ledger, const BigDay& bd, std::int64_t horizon) {
  if (horizon < 1) throw DomainError("price_restable: horizon must be >= 1");
  std::map<std::int64_t, std::pair<double, std::int64_t>> by_offset;  // sum, count
  for (const auto& e : ledger.events()) {
    const auto off = (floor<days>(e.timestamp) - bd.date).count();
    if (off < 0 || off > horizon) continue;
    auto& acc = by_offset[off];
    acc.first += e.price_usd;
    ++acc.second;
  }
  Restable out;
  const auto base = by_offset.find(0);
  if (base == by_offset.end()) throw DomainError("price_restable: no trades on the Big Day");
  out.big_day_average = base->second.first / static_cast<double>(base->second.second);
  if (out.big_day_average <= 0.0) return out;

  double sum = 0.0;
  std::int64_t count = 0;
  double best = 0.0;
  for (std::int64_t k = 1; k <= horizon; ++k) {
    const auto it = by_offset.find(k);
    if (it == by_offset.end()) continue;
    sum += it->second.first;
    count += it->second.second;
    const double rate = (sum / static_cast<double>(count)) / out.big_day_average;
    out.rates.emplace_back(k, rate);
    if (!out.defined || std::abs(rate - 1.0) < best) {
      out.defined = true;
      best = std::abs(rate - 1.0);
      out.interval = k;
      out.rate = rate;
    }
  }
  return out;
}

std::vector<regress::GameAggregates> bucket_aggregates(const TradeLedger& ledger,
                                                       std::int64_t bucket_days) {
  if (bucket_days < 1) throw DomainError("bucket_aggregates: bucket_days must be >= 1");
  std::vector<regress::GameAggregates> out;
  if (ledger.empty()) return out;

  Day first = floor<days>(ledger.events().front().timestamp);
  for (const auto& e : ledger.events()) first = std::min(first, floor<days>(e.timestamp));

  struct Bucket {
    std::int64_t trades = 0;
    double price_sum = 0.0;
    std::set<std::string> tokens;
    std::vector<double> player_profits;
  };
  std::map<std::int64_t, Bucket> buckets;
  const ProfitSummary profits = profit_chains(ledger);
  const auto& ev = ledger.events();
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const auto b = (floor<days>(ev[i].timestamp) - first).count() / bucket_days;
    auto& bucket = buckets[b];
    ++bucket.trades;
    bucket.price_sum += ev[i].price_usd;
    bucket.tokens.insert(ev[i].token_id);
    if (!profits.trades[i].developer) bucket.player_profits.push_back(profits.trades[i].profit);
  }
  for (const auto& [index, b] : buckets) {
    if (b.player_profits.empty()) continue;
    regress::GameAggregates g;
    g.avg_trade_price = b.price_sum / static_cast<double>(b.trades);
    g.circulation_rate = circulation_rate_from_counts(
        b.trades, static_cast<std::int64_t>(b.tokens.size()));
    g.mean_profit = mean_of(b.player_profits);
    out.push_back(g);
  }
  return out;
}

}  // namespace p2e::ledger
