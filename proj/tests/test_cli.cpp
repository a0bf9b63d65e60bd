#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli_app.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = p2e::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "p2e_cli_tests";
  fs::create_directories(dir);
  const auto p = dir / name;
  fs::remove(p);
  fs::remove(p.string() + ".manifest.json");
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::string kScenario = std::string(P2E_DATA_DIR) + "/scenarios/lokl.json";

}  // namespace

TEST_CASE("opt points on a small profile") {
  const auto profile = scratch("profile.csv");
  std::ofstream(profile) << "asset_id,t,value\nx,1,3\nx,2,1\nx,3,4\nx,4,2\n";
  const auto r = run({"opt", "points", "--profile", profile.string()});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out)["plans"];
  REQUIRE(doc.size() == 1);
  CHECK(doc[0]["asset_id"] == "x");
  CHECK(doc[0]["payoff"] == 3.0);
  CHECK(doc[0]["buys"] == nlohmann::json::array({2}));
  CHECK(doc[0]["sells"] == nlohmann::json::array({3}));
}

TEST_CASE("fit eval reproduces the estimated column") {
  const auto r = run({"fit", "eval", "--table", P2E_DATA_DIR "/profit_model_table.csv"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  const auto& rows = doc["rows"];
  REQUIRE(rows.size() == 12);
  for (const auto& row : rows) {
    CHECK(std::abs(row["estimated_profit"].get<double>() - row["table_estimated_profit"].get<double>()) <=
          0.005);
  }
}

TEST_CASE("results and manifest go to --out") {
  const auto out = scratch("run.json");
  const auto r = run({"sim", "run", "--scenario", kScenario, "--seed", "9", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  REQUIRE(fs::exists(out));
  const auto manifest = nlohmann::json::parse(slurp(out.string() + ".manifest.json"));
  CHECK(manifest["command"] == "sim run");
  CHECK(manifest["seed"] == 9);
  CHECK(manifest["inputs"]["scenario"] == kScenario);
  CHECK(manifest.contains("created_utc"));
}

TEST_CASE("repeated sim run is byte identical") {
  const auto a = scratch("a.json"), b = scratch("b.json");
  for (const auto& p : {a, b}) {
    REQUIRE(run({"sim", "run", "--scenario", kScenario, "--runs", "3", "--incentive", "on",
                 "--out", p.string()})
                .code == 0);
  }
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
}

TEST_CASE("missing input is an I/O error and nothing is written") {
  const auto out = scratch("never.json");
  const auto r = run({"sim", "run", "--scenario", "/nonexistent/s.json", "--out", out.string()});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: io: ", 0) == 0);
  CHECK_FALSE(fs::exists(out));
  CHECK_FALSE(fs::exists(out.string() + ".manifest.json"));
}

TEST_CASE("usage and domain errors exit 1") {
  const auto unknown = run({"sim", "run", "--scenario", kScenario, "--bogus"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.rfind("error: usage: ", 0) == 0);

  CHECK(run({}).code == 1);
  CHECK(run({"sim", "run", "--scenario", kScenario, "--format", "xml"}).code == 1);

  const auto domain = run({"sim", "run", "--scenario", kScenario, "--K", "0"});
  CHECK(domain.code == 1);
  CHECK(domain.err.rfind("error: domain: ", 0) == 0);

  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("ledger analyze lists rejects inside the report") {
  const auto trades = scratch("trades.csv");
  std::ofstream(trades) << "game,token_id,seller,buyer,price_usd,timestamp\n"
                        << "G,t1,dev,a,10,2022-01-01T00:00:00Z\n"
                        << "G,t1,a,b,12,2022-01-02T00:00:00Z\n"
                        << "G,t2,dev,a,-1,2022-01-02T00:00:00Z\n";
  const auto r = run({"ledger", "analyze", "--trades", trades.string()});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["reject_rows"].size() == 1);
  CHECK(doc["reject_rows"][0]["line"] == 4);
}

TEST_CASE("csv format") {
  const auto r = run({"sim", "run", "--scenario", kScenario, "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find(',') != std::string::npos);
  CHECK(r.out.find('{') == std::string::npos);
}
