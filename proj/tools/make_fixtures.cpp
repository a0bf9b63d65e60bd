// Writes the synthetic trade logs used by the ledger tests.
//
// Prices are integer multiples of 1/128 USD, so every sum and difference the
// ledger computes on them is exact in double precision.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "p2e/csv.hpp"
#include "p2e/ledger.hpp"

namespace {

using namespace std::chrono;
using p2e::ledger::Instant;

constexpr double kUnit = 1.0 / 128.0;

struct Row {
  std::string token, seller, buyer;
  std::int64_t units = 0;
  Instant when{};
};

Instant day(int y, unsigned m, unsigned d) { return Instant{sys_days{year{y} / month{m} / d}}; }

std::string wallet(const std::string& prefix, std::size_t i) {
  std::ostringstream s;
  s << "0x" << prefix << std::hex << i;
  return s.str();
}

void write(const std::filesystem::path& path, const std::string& game, std::vector<Row> rows) {
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.when != b.when) return a.when < b.when;
    return a.token < b.token;
  });
  std::ostringstream out;
  out << "game,token_id,seller,buyer,price_usd,timestamp\n";
  for (const auto& r : rows) {
    out << game << ',' << r.token << ',' << r.seller << ',' << r.buyer << ','
        << p2e::csv::format_double(static_cast<double>(r.units) * kUnit) << ','
        << p2e::ledger::format_timestamp(r.when) << '\n';
  }
  p2e::csv::write_file_atomic(path.string(), out.str());
  std::cout << path.string() << ": " << rows.size() << " trades\n";
}

// Shifts values by a common offset (plus a remainder on the first few) so they sum to `target`.
void hit_sum(std::vector<std::int64_t>& xs, std::int64_t target) {
  std::int64_t sum = 0;
  for (auto x : xs) sum += x;
  const auto n = static_cast<std::int64_t>(xs.size());
  std::int64_t diff = target - sum;
  const std::int64_t each = diff / n;
  for (auto& x : xs) x += each;
  diff -= each * n;
  for (std::int64_t i = 0; diff != 0; ++i) {
    const std::int64_t step = diff > 0 ? 1 : -1;
    xs[static_cast<std::size_t>(i % n)] += step;
    diff -= step;
  }
}

// 3,835 trades over 2,317 tokens. Final holdings: one wallet with 582 tokens,
// 1,097 wallets with one and 319 with two. The busiest day carries 1,068 trades.
void blnks(const std::filesystem::path& dir, std::mt19937_64& rng) {
  constexpr std::size_t kTokens = 2317, kResales = 1518, kTrades = kTokens + kResales;
  constexpr std::int64_t kBigDayTrades = 1068;

  // Daily trade counts from 2022-02-08 for 82 days; the big day is 2022-03-19.
  const Instant start = day(2022, 2, 8);
  const auto big = (sys_days{year{2022} / 3 / 19} - sys_days{year{2022} / 2 / 8}).count();
  constexpr int kDays = 82;
  std::vector<std::int64_t> per_day(kDays, 0);
  per_day[static_cast<std::size_t>(big)] = kBigDayTrades;
  std::int64_t left = static_cast<std::int64_t>(kTrades) - kBigDayTrades;
  std::uniform_int_distribution<int> pick_day(0, kDays - 1);
  while (left > 0) {
    const auto d = static_cast<std::size_t>(pick_day(rng));
    if (static_cast<std::int64_t>(d) == big) continue;
    ++per_day[d];
    --left;
  }
  std::vector<Instant> stamps;
  for (int d = 0; d < kDays; ++d) {
    const auto n = per_day[static_cast<std::size_t>(d)];
    for (std::int64_t i = 0; i < n; ++i) {
      stamps.push_back(start + days{d} + seconds{i * (86400 / std::max<std::int64_t>(n, 1))});
    }
  }
  std::sort(stamps.begin(), stamps.end());

  std::vector<std::string> owner(kTokens);
  for (std::size_t t = 0; t < kTokens; ++t) {
    if (t < 582) {
      owner[t] = "0xwhale";
    } else if (t < 582 + 1097) {
      owner[t] = wallet("single", t);
    } else {
      owner[t] = wallet("pair", (t - 582 - 1097) / 2);
    }
  }
  std::shuffle(owner.begin(), owner.end(), rng);

  std::uniform_int_distribution<std::int64_t> dev_price(100 * 128, 500 * 128);
  std::uniform_int_distribution<std::int64_t> markup(-60 * 128, 140 * 128);
  std::uniform_int_distribution<std::size_t> flipper(0, 299);
  std::vector<Row> rows;
  std::size_t next = 0;
  // Round-major: every first sale precedes every resale, so chains stay ordered.
  std::vector<std::int64_t> first_price(kTokens);
  for (std::size_t t = 0; t < kTokens; ++t) {
    first_price[t] = dev_price(rng);
    const std::string buyer = t < kResales ? wallet("flip", flipper(rng)) : owner[t];
    rows.push_back({"blnks-" + std::to_string(t), "0xblnksdev", buyer, first_price[t],
                    stamps[next++]});
  }
  for (std::size_t t = 0; t < kResales; ++t) {
    const std::int64_t price = std::max<std::int64_t>(0, first_price[t] + markup(rng));
    rows.push_back({"blnks-" + std::to_string(t), rows[t].buyer, owner[t], price,
                    stamps[next++]});
  }
  write(dir / "blnks_trades.csv", "BLNKS", std::move(rows));
}

// 5,250 trades over 4,883 tokens; 367 tokens are resold once. Resale profits
// average 78.64 with median 0.74 and mode -1.26; first sales average 22.93
// and all trades average 35.57.
void ck(const std::filesystem::path& dir, std::mt19937_64& rng) {
  constexpr std::size_t kTokens = 4883, kResold = 367;

  std::vector<std::int64_t> profit;
  for (int i = 0; i < 120; ++i) profit.push_back(-161);             // -1.2578 -> -1.26
  for (int k = 0; k < 63; ++k) profit.push_back(-161 + 3 * (k + 1));  // below the median
  profit.push_back(95);                                              // median 0.7422
  std::vector<std::int64_t> upper;
  for (int k = 0; k < 183; ++k) upper.push_back(100 + 222 * k);
  const std::int64_t profit_total = 3694193;  // 78.64 * 367 * 128
  std::int64_t lower_sum = 0;
  for (auto p : profit) lower_sum += p;
  std::int64_t upper_sum = 0;
  for (auto p : upper) upper_sum += p;
  upper.back() += profit_total - lower_sum - upper_sum;
  profit.insert(profit.end(), upper.begin(), upper.end());
  std::shuffle(profit.begin(), profit.end(), rng);

  std::uniform_int_distribution<std::int64_t> resold_dev(1000, 31000);
  std::vector<std::int64_t> dev_resold(kResold);
  for (auto& d : dev_resold) d = resold_dev(rng);
  hit_sum(dev_resold, 5877047);  // 45914.43 * 128

  std::uniform_int_distribution<std::int64_t> plain_dev(500, 3244);
  std::vector<std::int64_t> dev_plain(kTokens - kResold);
  for (auto& d : dev_plain) d = plain_dev(rng);
  hit_sum(dev_plain, 8454753);  // 66052.76 * 128

  const Instant start = day(2017, 12, 1);
  std::vector<Row> rows;
  for (std::size_t t = 0; t < kTokens; ++t) {
    const bool resold = t < kResold;
    const std::int64_t dev = resold ? dev_resold[t] : dev_plain[t - kResold];
    const std::string token = "ck-" + std::to_string(t);
    const std::string first_buyer = wallet("ckp", t % 1500);
    const Instant sold = start + seconds{static_cast<std::int64_t>(t) * 600};
    rows.push_back({token, "0xckdev", first_buyer, dev, sold});
    if (resold) {
      rows.push_back({token, first_buyer, wallet("ckq", t), dev + profit[t], sold + days{30}});
    }
  }
  write(dir / "ck_trades.csv", "CK", std::move(rows));
}

// 3,000 tokens: one wallet holds 2,170 and the ten largest hold 2,453.
void landd_holdings(const std::filesystem::path& dir) {
  const std::vector<std::int64_t> next_nine = {40, 38, 36, 34, 32, 30, 28, 24, 21};
  std::vector<std::string> owner;
  for (int i = 0; i < 2170; ++i) owner.push_back("0xlanddwhale");
  for (std::size_t w = 0; w < next_nine.size(); ++w) {
    for (std::int64_t i = 0; i < next_nine[w]; ++i) owner.push_back(wallet("estate", w));
  }
  for (std::size_t i = 0; owner.size() < 3000; ++i) owner.push_back(wallet("parcel", i));

  const Instant start = day(2020, 2, 1);
  std::vector<Row> rows;
  for (std::size_t t = 0; t < owner.size(); ++t) {
    rows.push_back({"land-" + std::to_string(t), "0xlandddev", owner[t],
                    static_cast<std::int64_t>(2000 + (t % 50) * 40) * 128,
                    start + seconds{static_cast<std::int64_t>(t) * 900}});
  }
  write(dir / "landd_holdings.csv", "LANDD", std::move(rows));
}

// 100 wallets buy three times 55 days apart and 100 wallets buy twice 254 days
// apart: pooled intervals have median 55 and mean 121.33.
void landd_intervals(const std::filesystem::path& dir) {
  const Instant start = day(2020, 3, 1);
  std::vector<Row> rows;
  std::size_t token = 0;
  auto buy = [&](const std::string& who, Instant when) {
    rows.push_back({"parcel-" + std::to_string(token++), "0xlandddev", who, 300 * 128, when});
  };
  for (std::size_t w = 0; w < 100; ++w) {
    const Instant t0 = start + hours{static_cast<std::int64_t>(w)};
    for (int k = 0; k < 3; ++k) buy(wallet("steady", w), t0 + days{55 * k});
  }
  for (std::size_t w = 0; w < 100; ++w) {
    const Instant t0 = start + hours{static_cast<std::int64_t>(w)} + minutes{30};
    buy(wallet("patient", w), t0);
    buy(wallet("patient", w), t0 + days{254});
  }
  write(dir / "landd_intervals.csv", "LANDD", std::move(rows));
}

// A promotion day of 100 sales at 100, then 10 sales at 110, 10 at 96 and
// five per day at 125 for the following twelve days.
void axie(const std::filesystem::path& dir) {
  const Instant big = day(2021, 7, 12);
  std::vector<Row> rows;
  std::size_t token = 0;
  auto sale = [&](Instant when, std::int64_t usd) {
    rows.push_back({"axie-" + std::to_string(token), "0xaxiedev", wallet("axp", token),
                    usd * 128, when});
    ++token;
  };
  for (int d = 1; d <= 5; ++d) {
    for (int i = 0; i < 20; ++i) sale(big - days{d} + minutes{i * 30}, 90);
  }
  for (int i = 0; i < 100; ++i) sale(big + minutes{i * 10}, 100);
  for (int i = 0; i < 10; ++i) sale(big + days{1} + minutes{i * 60}, 110);
  for (int i = 0; i < 10; ++i) sale(big + days{2} + minutes{i * 60}, 96);
  for (int d = 3; d <= 14; ++d) {
    for (int i = 0; i < 5; ++i) sale(big + days{d} + minutes{i * 60}, 125);
  }
  write(dir / "axie_trades.csv", "AXIE", std::move(rows));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <output-dir>\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(20230630);
  blnks(dir, rng);
  ck(dir, rng);
  landd_holdings(dir);
  landd_intervals(dir);
  axie(dir);
  return 0;
}
