#include "ddp/config.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace ddp {

namespace {

using nlohmann::json;

// Fetch helpers collect problems instead of throwing, so one pass reports
// every defect in the file.
struct Collector {
  std::vector<std::string> problems;

  bool has(const json& j, const char* key) const { return j.contains(key); }

  double number(const json& j, const std::string& where, const char* key,
                bool required, double fallback) {
    if (!j.contains(key)) {
      if (required) problems.push_back(where + ": missing key '" + key + "'");
      return fallback;
    }
    if (!j[key].is_number()) {
      problems.push_back(where + ": '" + key + "' must be a number");
      return fallback;
    }
    return j[key].get<double>();
  }

  Vec number_list(const json& j, const std::string& where, const char* key) {
    Vec out;
    if (!j.contains(key)) {
      problems.push_back(where + ": missing key '" + key + "'");
      return out;
    }
    if (!j[key].is_array()) {
      problems.push_back(where + ": '" + key + "' must be an array of numbers");
      return out;
    }
    for (const auto& v : j[key]) {
      if (!v.is_number()) {
        problems.push_back(where + ": '" + key + "' must hold numbers only");
        return {};
      }
      out.push_back(v.get<double>());
    }
    return out;
  }

  std::string text(const json& j, const std::string& where, const char* key,
                   bool required, const std::string& fallback) {
    if (!j.contains(key)) {
      if (required) problems.push_back(where + ": missing key '" + key + "'");
      return fallback;
    }
    if (!j[key].is_string()) {
      problems.push_back(where + ": '" + key + "' must be a string");
      return fallback;
    }
    return j[key].get<std::string>();
  }
};

UtilitySpec parse_utility(const json& j, const std::string& where, Collector& c) {
  UtilitySpec u;
  if (!j.is_object()) {
    c.problems.push_back(where + ": 'utility' must be an object");
    return u;
  }
  std::string family = c.text(j, where, "family", true, "capped-linear");
  json params = j.contains("params") ? j["params"] : json::object();
  if (family == "capped-linear") {
    u.family = UtilityFamily::CappedLinear;
  } else if (family == "step") {
    u.family = UtilityFamily::Step;
  } else if (family == "staircase" || family == "piecewise-linear") {
    u.family = family == "staircase" ? UtilityFamily::Staircase
                                     : UtilityFamily::PiecewiseLinear;
    u.at = c.number_list(params, where + ".params", "at");
    u.value = c.number_list(params, where + ".params", "value");
  } else {
    c.problems.push_back(where + ": unknown utility family '" + family + "'");
  }
  return u;
}

ConsumerType parse_type(const json& j, const std::string& where, bool probe,
                        Collector& c) {
  ConsumerType t;
  if (!j.is_object()) {
    c.problems.push_back(where + ": must be an object");
    return t;
  }
  t.deadline = int(c.number(j, where, "deadline", true, 1));
  t.rate = c.number(j, where, "R", true, 0.0);
  t.demand = c.number(j, where, "q", true, 0.0);
  t.mass = probe ? 0.0 : c.number(j, where, "mass", true, 0.0);
  if (probe && c.has(j, "mass") &&
      (!j["mass"].is_number() || j["mass"].get<double>() != 0.0))
    c.problems.push_back(where + ": probes cannot carry mass");
  t.label = c.text(j, where, "label", false, "");
  if (c.has(j, "utility"))
    t.utility = parse_utility(j["utility"], where + ".utility", c);
  return t;
}

SupplyModel parse_supply(const json& j, const std::string& dir, Collector& c) {
  SupplyModel m;
  std::string where = "supply";
  if (!j.is_object()) {
    c.problems.push_back(where + ": must be an object");
    return m;
  }
  std::string kind = c.text(j, where, "kind", true, "");
  json params = j.contains("params") ? j["params"] : json::object();
  if (!params.is_object()) {
    c.problems.push_back("supply.params: must be an object");
    return m;
  }
  if (kind == "deterministic") {
    m = make_deterministic(c.number_list(params, "supply.params", "path"));
  } else if (kind == "finite-scenario") {
    std::vector<Vec> paths;
    if (!params.contains("paths") || !params["paths"].is_array()) {
      c.problems.push_back("supply.params: missing 'paths' array");
    } else {
      for (std::size_t i = 0; i < params["paths"].size(); ++i) {
        json holder;
        holder["row"] = params["paths"][i];
        paths.push_back(c.number_list(
            holder, "supply.params.paths[" + std::to_string(i) + "]", "row"));
      }
    }
    Vec probs = c.number_list(params, "supply.params", "probs");
    m = make_finite_scenario(std::move(paths), std::move(probs));
  } else if (kind == "iid-uniform") {
    m = make_iid_uniform(c.number_list(params, "supply.params", "low"),
                         c.number_list(params, "supply.params", "high"));
  } else if (kind == "trace-file") {
    std::string file = c.text(params, "supply.params", "file", true, "");
    if (!file.empty()) {
      std::filesystem::path p(file);
      if (p.is_relative()) p = std::filesystem::path(dir) / p;
      try {
        m = load_trace_csv(p.string());
      } catch (const Error& e) {
        c.problems.push_back(std::string("supply.params.file: ") + e.what());
      }
    }
  } else if (kind.empty()) {
    // missing-key problem already recorded
  } else {
    c.problems.push_back("supply.kind: unknown kind '" + kind + "'");
  }
  return m;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file: " + path});
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("parse error: ") + e.what()});
  }

  Collector c;
  ExperimentConfig cfg;
  std::string dir = std::filesystem::path(path).parent_path().string();
  if (dir.empty()) dir = ".";

  bool market_ok = false;
  if (!root.contains("market") || !root["market"].is_object()) {
    c.problems.push_back("market: missing section");
  } else {
    cfg.market.periods = int(c.number(root["market"], "market", "N", true, 0));
    cfg.market.c0 = c.number(root["market"], "market", "c0", true, 0.0);
    if (cfg.market.periods < 1) c.problems.push_back("market.N: must be >= 1");
    if (!(cfg.market.c0 > 0.0)) c.problems.push_back("market.c0: must be > 0");
    market_ok = cfg.market.periods >= 1 && cfg.market.c0 > 0.0;
  }

  if (!root.contains("supply") || !root["supply"].is_object()) {
    c.problems.push_back("supply: missing section");
  } else {
    std::size_t before = c.problems.size();
    cfg.supply = parse_supply(root["supply"], dir, c);
    if (c.problems.size() == before) {
      if (market_ok && cfg.supply.periods != cfg.market.periods)
        c.problems.push_back("supply: paths/bounds have length " +
                             std::to_string(cfg.supply.periods) +
                             " but market.N is " +
                             std::to_string(cfg.market.periods));
      ModelCheck mc = validate_model(cfg.supply);
      for (const auto& v : mc.result.violations)
        c.problems.push_back("supply: " + v);
    }
  }

  auto parse_side = [&](const char* key, bool probe,
                        std::vector<ConsumerType>& sink) {
    if (!root.contains(key)) return;
    if (!root[key].is_array()) {
      c.problems.push_back(std::string(key) + ": must be an array");
      return;
    }
    for (std::size_t i = 0; i < root[key].size(); ++i) {
      std::string where = std::string(key) + "[" + std::to_string(i) + "]";
      sink.push_back(parse_type(root[key][i], where, probe, c));
    }
  };
  parse_side("types", false, cfg.population.entries);
  parse_side("probes", true, cfg.population.probes);

  if (market_ok) {
    ValidationResult pv = validate_population(cfg.population, cfg.market.periods);
    for (const auto& v : pv.violations) c.problems.push_back("types[]: " + v);
  }

  if (root.contains("run")) {
    const json& r = root["run"];
    if (!r.is_object()) {
      c.problems.push_back("run: must be an object");
    } else {
      cfg.run.samples = long(c.number(r, "run", "samples", false,
                                      double(cfg.run.samples)));
      cfg.run.seed = std::uint64_t(c.number(r, "run", "seed", false, 0.0));
      cfg.run.grid = int(c.number(r, "run", "grid", false, double(cfg.run.grid)));
      cfg.run.step = c.number(r, "run", "step", false, cfg.run.step);
      if (r.contains("relative_step")) {
        if (r["relative_step"].is_boolean())
          cfg.run.relative_step = r["relative_step"].get<bool>();
        else
          c.problems.push_back("run.relative_step: must be a boolean");
      }
      cfg.run.workers = int(c.number(r, "run", "workers", false,
                                     double(cfg.run.workers)));
      cfg.run.method = c.text(r, "run", "method", false, cfg.run.method);
      cfg.run.format = c.text(r, "run", "format", false, cfg.run.format);
      if (cfg.run.samples < 1) c.problems.push_back("run.samples: must be >= 1");
      if (cfg.run.workers < 1) c.problems.push_back("run.workers: must be >= 1");
      if (cfg.run.grid < 1) c.problems.push_back("run.grid: must be >= 1");
      if (!(cfg.run.step > 0.0)) c.problems.push_back("run.step: must be > 0");
      if (cfg.run.method != "auto" && cfg.run.method != "exact" &&
          cfg.run.method != "monte-carlo")
        c.problems.push_back("run.method: one of auto|exact|monte-carlo");
      if (cfg.run.format != "json" && cfg.run.format != "csv" &&
          cfg.run.format != "md")
        c.problems.push_back("run.format: one of json|csv|md");
    }
  }

  if (!c.problems.empty()) throw ConfigError(std::move(c.problems));
  return cfg;
}

}  // namespace ddp
