#include "ddp/supply.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ddp {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void check_paths(const SupplyModel& m, ValidationResult& r) {
  if (m.paths.empty()) {
    r.fail("model carries no supply paths");
    return;
  }
  for (std::size_t i = 0; i < m.paths.size(); ++i) {
    if (int(m.paths[i].size()) != m.periods) {
      r.fail("path " + std::to_string(i) + " has length " +
             std::to_string(m.paths[i].size()) + ", expected " +
             std::to_string(m.periods));
      continue;
    }
    for (int k = 0; k < m.periods; ++k) {
      if (!finite_nonneg(m.paths[i][k]))
        r.fail("path " + std::to_string(i) + " period " + std::to_string(k) +
               " is not finite nonnegative");
    }
  }
}

}  // namespace

ModelCheck validate_model(const SupplyModel& model) {
  ModelCheck out;
  ValidationResult& r = out.result;
  if (model.periods < 1) r.fail("periods must be >= 1");

  switch (model.kind) {
    case SupplyKind::Deterministic:
      check_paths(model, r);
      if (model.paths.size() != 1)
        r.fail("deterministic model must carry exactly one path");
      break;
    case SupplyKind::FiniteScenario:
    case SupplyKind::TraceFile: {
      check_paths(model, r);
      if (model.probs.size() != model.paths.size()) {
        r.fail("probability list length " + std::to_string(model.probs.size()) +
               " does not match path count " + std::to_string(model.paths.size()));
        break;
      }
      double total = 0.0;
      for (std::size_t i = 0; i < model.probs.size(); ++i) {
        if (!(std::isfinite(model.probs[i]) && model.probs[i] > 0.0))
          r.fail("scenario " + std::to_string(i) + " probability must be > 0");
        else
          total += model.probs[i];
      }
      if (r.ok() && !near(total, 1.0, 1e-12))
        r.fail("scenario probabilities sum to " + std::to_string(total) +
               ", expected 1 within 1e-12");
      break;
    }
    case SupplyKind::IidUniform: {
      out.continuous_law = true;
      if (int(model.low.size()) != model.periods ||
          int(model.high.size()) != model.periods) {
        r.fail("bound vectors must both have length " + std::to_string(model.periods));
        break;
      }
      for (int k = 0; k < model.periods; ++k) {
        if (!finite_nonneg(model.low[k]) || !std::isfinite(model.high[k]))
          r.fail("period " + std::to_string(k) + " bounds must be finite, low >= 0");
        else if (!(model.low[k] < model.high[k]))
          r.fail("period " + std::to_string(k) + " needs low < high for a continuous law");
      }
      break;
    }
  }
  return out;
}

ModelCheck validate_model(const SupplyModel& model, int periods) {
  ModelCheck out = validate_model(model);
  if (model.periods != periods)
    out.result.fail("model horizon " + std::to_string(model.periods) +
                    " does not match the market's " + std::to_string(periods) +
                    " periods");
  return out;
}

Vec sample_path(const SupplyModel& model, Rng& rng) {
  switch (model.kind) {
    case SupplyKind::Deterministic:
      return model.paths.at(0);
    case SupplyKind::FiniteScenario:
    case SupplyKind::TraceFile: {
      // Inverse CDF over the scenario list.
      double u = rng.next_double();
      double acc = 0.0;
      for (std::size_t i = 0; i < model.paths.size(); ++i) {
        acc += model.probs[i];
        if (u < acc) return model.paths[i];
      }
      return model.paths.back();
    }
    case SupplyKind::IidUniform: {
      Vec s(model.periods);
      for (int k = 0; k < model.periods; ++k)
        s[k] = rng.uniform(model.low[k], model.high[k]);
      return s;
    }
  }
  throw Error("supply.kind", "unknown supply kind");
}

Vec sample_path(const SupplyModel& model, std::uint64_t seed) {
  Rng rng(seed);
  return sample_path(model, rng);
}

bool enumerable(const SupplyModel& model) {
  return model.kind != SupplyKind::IidUniform;
}

ScenarioList enumerate_scenarios(const SupplyModel& model) {
  if (!enumerable(model))
    throw Error("supply.enumerate.unsupported",
                "exact enumeration requested for a continuous supply model");
  ScenarioList out;
  out.paths = model.paths;
  if (model.kind == SupplyKind::Deterministic) {
    out.weights.assign(1, 1.0);
    return out;
  }
  out.weights = model.probs;
  // Normalize so downstream partition identities hold to full precision even
  // when the stored probabilities carry rounding at the 1e-12 level.
  double total = 0.0;
  for (double w : out.weights) total += w;
  for (double& w : out.weights) w /= total;
  return out;
}

SupplyModel make_deterministic(Vec path) {
  SupplyModel m;
  m.kind = SupplyKind::Deterministic;
  m.periods = int(path.size());
  m.paths.push_back(std::move(path));
  m.probs.assign(1, 1.0);
  return m;
}

SupplyModel make_finite_scenario(std::vector<Vec> paths, std::vector<double> probs) {
  SupplyModel m;
  m.kind = SupplyKind::FiniteScenario;
  m.periods = paths.empty() ? 0 : int(paths[0].size());
  m.paths = std::move(paths);
  m.probs = std::move(probs);
  return m;
}

SupplyModel make_iid_uniform(Vec low, Vec high) {
  SupplyModel m;
  m.kind = SupplyKind::IidUniform;
  m.periods = int(low.size());
  m.low = std::move(low);
  m.high = std::move(high);
  return m;
}

SupplyModel load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("supply.trace.open", "cannot open trace file: " + path);

  std::vector<Vec> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip trailing CR from files with Windows line endings.
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Vec row;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      ++col;
      const char* begin = cell.c_str();
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      while (end && *end == ' ') ++end;
      if (end == begin || (end && *end != '\0') || !std::isfinite(v) || v < 0.0)
        throw Error("supply.trace.parse",
                    "trace row " + std::to_string(lineno) + " column " +
                        std::to_string(col) + ": expected nonnegative number, got '" +
                        cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows[0].size())
      throw Error("supply.trace.parse",
                  "trace row " + std::to_string(lineno) + " has " +
                      std::to_string(row.size()) + " columns, expected " +
                      std::to_string(rows[0].size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw Error("supply.trace.parse", "trace file has no scenarios: " + path);

  SupplyModel m;
  m.kind = SupplyKind::TraceFile;
  m.periods = int(rows[0].size());
  m.probs.assign(rows.size(), 1.0 / double(rows.size()));
  m.paths = std::move(rows);
  return m;
}

}  // namespace ddp
