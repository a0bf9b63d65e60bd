#include "p2e/ledger.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "p2e/csv.hpp"
#include "p2e/error.hpp"

namespace p2e::ledger {

namespace {

using namespace std::chrono;

bool digits(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return true;
}

std::optional<Day> parse_date_part(std::string_view s) {
  int y = 0, mo = 0, d = 0;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!digits(s, 0, 4, y) || !digits(s, 5, 2, mo) || !digits(s, 8, 2, d)) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

}  // namespace

std::optional<Instant> parse_timestamp(std::string_view s) {
  if (s.size() != 20 || s[10] != 'T' || s[13] != ':' || s[16] != ':' || s[19] != 'Z') {
    return std::nullopt;
  }
  const auto date = parse_date_part(s.substr(0, 10));
  if (!date) return std::nullopt;
  int h = 0, mi = 0, se = 0;
  if (!digits(s, 11, 2, h) || !digits(s, 14, 2, mi) || !digits(s, 17, 2, se)) {
    return std::nullopt;
  }
  if (h > 23 || mi > 59 || se > 59) return std::nullopt;
  return Instant{*date} + hours{h} + minutes{mi} + seconds{se};
}

std::optional<Day> parse_day(std::string_view text) {
  if (text.size() != 10) return std::nullopt;
  return parse_date_part(text);
}

std::string format_day(Day d) {
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_timestamp(Instant t) {
  const Day d = floor<days>(t);
  const hh_mm_ss<seconds> hms{t - d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return format_day(d) + buf;
}

TradeLedger::TradeLedger(std::vector<TradeEvent> events, std::vector<Reject> rejects)
    : events_(std::move(events)), rejects_(std::move(rejects)) {
  std::stable_sort(events_.begin(), events_.end(), [](const TradeEvent& a, const TradeEvent& b) {
    if (a.token_id != b.token_id) return a.token_id < b.token_id;
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.line < b.line;
  });
  // A chain must be strictly time-ordered; a second trade at the same instant is rejected.
  std::vector<TradeEvent> kept;
  kept.reserve(events_.size());
  for (auto& e : events_) {
    if (!kept.empty() && kept.back().token_id == e.token_id &&
        kept.back().timestamp == e.timestamp) {
      rejects_.push_back({e.line, "duplicate timestamp within token chain",
                          e.game + ',' + e.token_id + ',' + e.seller + ',' + e.buyer + ',' +
                              csv::format_double(e.price_usd) + ',' +
                              format_timestamp(e.timestamp)});
      continue;
    }
    kept.push_back(std::move(e));
  }
  events_ = std::move(kept);
  std::sort(rejects_.begin(), rejects_.end(),
            [](const Reject& a, const Reject& b) { return a.line < b.line; });

  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (chains_.empty() || chains_.back().token_id != events_[i].token_id) {
      chains_.push_back({events_[i].token_id, i, i});
    }
    chains_.back().end = i + 1;
  }
}

TradeLedger TradeLedger::for_game(std::string_view game) const {
  std::vector<TradeEvent> kept;
  for (const auto& e : events_) {
    if (e.game == game) kept.push_back(e);
  }
  return TradeLedger(std::move(kept), rejects_);
}

TradeLedger ingest_text(std::string_view text) {
  const csv::Table table = csv::parse(text);
  if (table.header.empty()) throw IngestError("trades file has no header");
  const auto c_game = table.require_column("game");
  const auto c_token = table.require_column("token_id");
  const auto c_seller = table.require_column("seller");
  const auto c_buyer = table.require_column("buyer");
  const auto c_price = table.require_column("price_usd");
  const auto c_time = table.require_column("timestamp");

  std::vector<TradeEvent> events;
  std::vector<Reject> rejects;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& f = table.rows[r];
    const std::size_t line = r + 2;
    auto reject = [&](std::string reason) { rejects.push_back({line, std::move(reason), join(f)}); };

    if (f.size() != table.header.size()) {
      reject("expected " + std::to_string(table.header.size()) + " fields, found " +
             std::to_string(f.size()));
      continue;
    }
    TradeEvent e;
    e.game = f[c_game];
    e.token_id = f[c_token];
    e.seller = f[c_seller];
    e.buyer = f[c_buyer];
    e.line = line;
    if (e.game.empty() || e.token_id.empty() || e.seller.empty() || e.buyer.empty()) {
      reject("empty identifier");
      continue;
    }
    if (e.seller == e.buyer) {
      reject("seller equals buyer");
      continue;
    }
    const std::string& p = f[c_price];
    double price = 0.0;
    const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), price);
    if (p.empty() || ec != std::errc{} || ptr != p.data() + p.size() || !std::isfinite(price)) {
      reject("unparseable price");
      continue;
    }
    if (price < 0.0) {
      reject("negative price");
      continue;
    }
    e.price_usd = price;
    const auto ts = parse_timestamp(f[c_time]);
    if (!ts) {
      reject("unparseable timestamp");
      continue;
    }
    e.timestamp = *ts;
    events.push_back(std::move(e));
  }
  return TradeLedger(std::move(events), std::move(rejects));
}

TradeLedger ingest(const std::string& path) { return ingest_text(csv::read_text(path)); }

std::string rejects_csv(const TradeLedger& ledger) {
  std::ostringstream out;
  out << "line,reason,raw\n";
  for (const auto& r : ledger.rejects()) {
    std::string raw = r.raw;
    std::replace(raw.begin(), raw.end(), ',', ';');
    out << r.line << ',' << r.reason << ',' << raw << '\n';
  }
  return out.str();
}

void RateTable::add(Day date, std::string symbol, double usd_per_token) {
  if (!std::isfinite(usd_per_token) || usd_per_token < 0.0) {
    throw DomainError("rate for " + symbol + " on " + format_day(date) + " must be >= 0");
  }
  rates_[{date, std::move(symbol)}] = usd_per_token;
}

double RateTable::to_usd(double price_token, std::string_view symbol, Instant when) const {
  const Day d = std::chrono::floor<std::chrono::days>(when);
  const auto it = rates_.find({d, std::string(symbol)});
  if (it == rates_.end()) {
    throw DomainError("no " + std::string(symbol) + " rate for " + format_day(d));
  }
  return price_token * it->second;
}

RateTable read_rates(const std::string& path) {
  const csv::Table t = csv::read_file(path);
  const auto c_date = t.require_column("date");
  const auto c_sym = t.require_column("token_symbol");
  const auto c_rate = t.require_column("usd_per_token");
  RateTable table;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    t.require_width(r);
    const auto& f = t.rows[r];
    const auto d = parse_day(f[c_date]);
    if (!d) throw DomainError("rates: bad date at line " + std::to_string(r + 2));
    table.add(*d, f[c_sym], csv::parse_double(f[c_rate], "usd_per_token", r + 2));
  }
  return table;
}

}  // namespace p2e::ledger
