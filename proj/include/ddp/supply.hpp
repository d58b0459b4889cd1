#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddp/common.hpp"
#include "ddp/rng.hpp"

namespace ddp {

// Intermittent supply process over N periods.
//
//   deterministic    one fixed path
//   finite-scenario  explicit (path, probability) list
//   iid-uniform      independent per-period draws, uniform on [low_k, high_k]
//   trace-file       equiprobable historical paths ingested from CSV
//
// Only iid-uniform has an absolutely continuous per-period law with compact
// support; the closed-form menu results lean on that, so validate_model
// reports a `continuous_law` flag and samplers for discrete models are still
// provided for audits that only need expectations.
enum class SupplyKind { Deterministic, FiniteScenario, IidUniform, TraceFile };

struct SupplyModel {
  SupplyKind kind = SupplyKind::Deterministic;
  int periods = 0;

  // Deterministic / FiniteScenario / TraceFile: explicit paths.
  std::vector<Vec> paths;    // each of length `periods`
  std::vector<double> probs; // same length as paths; sums to 1

  // IidUniform: per-period bounds.
  Vec low;
  Vec high;
};

struct ScenarioList {
  std::vector<Vec> paths;
  std::vector<double> weights;  // normalized; sums to 1
};

struct ModelCheck {
  ValidationResult result;
  bool continuous_law = false;  // absolutely continuous per-period marginals
};

// Structural checks: shapes, nonnegative supply, probabilities normalizable,
// bounds ordered. Does not throw; all problems are collected.
ModelCheck validate_model(const SupplyModel& model);

// Same, plus a horizon cross-check against an expected period count.
ModelCheck validate_model(const SupplyModel& model, int periods);

// Draws one length-N path. Uses only `rng`; callers own seed discipline.
Vec sample_path(const SupplyModel& model, Rng& rng);

// Seed-addressed flavor: a pure function of (model, seed).
Vec sample_path(const SupplyModel& model, std::uint64_t seed);

// Full scenario expansion with normalized weights. Throws Error
// "supply.enumerate.unsupported" for models with continuous laws.
ScenarioList enumerate_scenarios(const SupplyModel& model);

bool enumerable(const SupplyModel& model);

// Factory helpers used by config loading and tests.
SupplyModel make_deterministic(Vec path);
SupplyModel make_finite_scenario(std::vector<Vec> paths, std::vector<double> probs);
SupplyModel make_iid_uniform(Vec low, Vec high);

// Parses a headerless CSV of comma-separated supply paths, one scenario per
// row, all rows the same width. Throws Error "supply.trace.parse" naming the
// offending row and column.
SupplyModel load_trace_csv(const std::string& path);

}  // namespace ddp
