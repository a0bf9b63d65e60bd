#include "p2e/scenario_io.hpp"

#include <filesystem>
#include <set>

#include "p2e/csv.hpp"
#include "p2e/error.hpp"

namespace p2e::io {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) throw DomainError("scenario: '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw DomainError("scenario: unknown key '" + key + "' in " + where);
    }
  }
}

double number(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw DomainError("scenario: " + where + "." + key + " must be a number");
  return v.get<double>();
}

std::int64_t integer(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw DomainError("scenario: " + where + "." + key + " must be an integer");
  }
  return v.get<std::int64_t>();
}

}  // namespace

sim::Scenario scenario_from_json(const json& doc, const std::string& base_dir) {
  only_keys(doc, "scenario",
            {"name", "economy", "profile", "profile_csv", "incentive", "shock", "estimator",
             "seed", "runs"});
  sim::Scenario s;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw DomainError("scenario: name must be a string");
    s.name = doc["name"].get<std::string>();
  }

  if (doc.contains("economy")) {
    const auto& e = doc["economy"];
    only_keys(e, "economy", {"N", "K", "T", "c", "f", "C0", "v0", "L", "U"});
    auto& p = s.params;
    if (e.contains("N")) p.N = integer(e, "N", "economy");
    if (e.contains("K")) p.K = integer(e, "K", "economy");
    if (e.contains("T")) p.T = integer(e, "T", "economy");
    if (e.contains("c")) p.c = number(e, "c", "economy");
    if (e.contains("f")) p.f = number(e, "f", "economy");
    if (e.contains("C0")) p.C0 = number(e, "C0", "economy");
    if (e.contains("L")) p.L = number(e, "L", "economy");
    if (e.contains("U")) p.U = number(e, "U", "economy");
    if (e.contains("v0")) {
      p.v0 = number(e, "v0", "economy");
      s.v0_explicit = true;
    }
  }

  const bool has_profile = doc.contains("profile");
  const bool has_csv = doc.contains("profile_csv");
  if (has_profile == has_csv) {
    throw DomainError("scenario: exactly one of 'profile' and 'profile_csv' is required");
  }
  if (has_profile) {
    const auto& p = doc["profile"];
    only_keys(p, "profile", {"sell_profit", "trade_price"});
    if (!p.contains("sell_profit") || !p.contains("trade_price")) {
      throw DomainError("scenario: profile needs sell_profit and trade_price");
    }
    s.profile = sim::AggregateProfile{number(p, "sell_profit", "profile"),
                                      number(p, "trade_price", "profile")};
  } else {
    if (!doc["profile_csv"].is_string()) {
      throw DomainError("scenario: profile_csv must be a path string");
    }
    std::filesystem::path path = doc["profile_csv"].get<std::string>();
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    s.profile = opt::read_profiles_csv(path.string());
  }

  if (doc.contains("incentive")) {
    const auto& inc = doc["incentive"];
    only_keys(inc, "incentive", {"enabled"});
    if (inc.contains("enabled")) {
      if (!inc["enabled"].is_boolean()) throw DomainError("scenario: incentive.enabled must be boolean");
      s.incentive_enabled = inc["enabled"].get<bool>();
    }
  }
  if (doc.contains("shock")) {
    const auto& sh = doc["shock"];
    only_keys(sh, "shock", {"kind", "sigma"});
    const std::string kind = sh.value("kind", std::string("none"));
    if (kind == "none") {
      s.shock.kind = sim::ShockKind::None;
    } else if (kind == "gaussian") {
      s.shock.kind = sim::ShockKind::Gaussian;
    } else {
      throw DomainError("scenario: shock.kind must be 'none' or 'gaussian'");
    }
    if (sh.contains("sigma")) s.shock.sigma = number(sh, "sigma", "shock");
  }
  if (doc.contains("estimator")) {
    const auto& es = doc["estimator"];
    only_keys(es, "estimator", {"kind"});
    const std::string kind = es.value("kind", std::string("martingale"));
    if (kind == "martingale") {
      s.estimator = sim::EstimatorKind::Martingale;
    } else if (kind == "last_diff") {
      s.estimator = sim::EstimatorKind::LastDiff;
    } else {
      throw DomainError("scenario: estimator.kind must be 'martingale' or 'last_diff'");
    }
  }
  if (doc.contains("seed")) {
    const auto& v = doc["seed"];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw DomainError("scenario: seed must be a non-negative integer");
    }
    s.seed = v.get<std::uint64_t>();
  }
  if (doc.contains("runs")) s.runs = integer(doc, "runs", "scenario");
  s.validate();
  return s;
}

sim::Scenario read_scenario(const std::string& path) {
  const std::string text = csv::read_text(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError("scenario '" + path + "' is not valid JSON: " + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path();
  try {
    return scenario_from_json(doc, dir.empty() ? "." : dir.string());
  } catch (const json::exception& e) {
    throw DomainError("scenario '" + path + "': " + e.what());
  }
}

nlohmann::ordered_json scenario_to_json(const sim::Scenario& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  const auto p = s.resolved_params();
  j["economy"] = {{"N", p.N}, {"K", p.K}, {"T", p.T}, {"c", p.c},  {"f", p.f},
                  {"C0", p.C0}, {"v0", p.v0}, {"L", p.L}, {"U", p.U}};
  if (const auto* agg = std::get_if<sim::AggregateProfile>(&s.profile)) {
    j["profile"] = {{"sell_profit", agg->sell_profit}, {"trade_price", agg->trade_price}};
  } else {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& prof : std::get<std::vector<opt::BasicProfile>>(s.profile)) {
      list.push_back({{"asset_id", prof.asset_id}, {"values", prof.values}});
    }
    j["profiles"] = list;
  }
  j["incentive"] = {{"enabled", s.incentive_enabled}};
  j["shock"] = {{"kind", s.shock.kind == sim::ShockKind::Gaussian ? "gaussian" : "none"},
                {"sigma", s.shock.sigma}};
  j["estimator"] = {
      {"kind", s.estimator == sim::EstimatorKind::LastDiff ? "last_diff" : "martingale"}};
  j["seed"] = s.seed;
  j["runs"] = s.runs;
  return j;
}

}  // namespace p2e::io
