#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddp/common.hpp"
#include "ddp/supply.hpp"

namespace ddp {

struct MarketConfig {
  int periods = 0;  // N
  double c0 = 0.0;  // firm energy price, currency per kWh
};

// How expectations get evaluated: exact scenario enumeration when the model
// permits it, Monte Carlo with `samples` draws otherwise.
struct EvalBudget {
  bool exact = false;
  long samples = 100000;
  std::uint64_t seed = 0;
  int workers = 1;
};

// Picks exact evaluation whenever the model is enumerable.
EvalBudget auto_budget(const SupplyModel& model, long samples, std::uint64_t seed,
                       int workers);

// A frozen set of supply paths with weights. Evaluating several bundles
// against one ScenarioSet gives common-random-number comparisons; every
// routine below reduces in index order so results never depend on workers.
struct ScenarioSet {
  std::vector<Vec> paths;
  std::vector<double> weights;  // sums to 1
  bool exact = false;
  bool continuous_law = false;
};

ScenarioSet realize_scenarios(const SupplyModel& model, const EvalBudget& budget);

struct CostEstimate {
  double value = 0.0;
  double se = 0.0;  // standard error; 0 for exact evaluation
  std::string method;
  long samples = 0;
};

// Expected firm-energy cost of serving bundle x: c0 * E[sum_k max(0, -xi_k)].
CostEstimate expected_firm_cost(const Vec& x, double c0, const ScenarioSet& sc,
                                int workers);
CostEstimate expected_firm_cost(const Vec& x, const MarketConfig& cfg,
                                const SupplyModel& model, const EvalBudget& budget);

// Deadline price menu. p[k-1] is the unit price for delivery guaranteed by
// period k-1: c0 times the probability that some deadline t in [k, N] ends
// with slack supply exhausted (xi_t <= 0). Built from suffix sums of
// nonnegative scenario weights, so c0 >= p_1 >= ... >= p_N >= 0 holds exactly
// in floating point, for exact and sampled scenario sets alike.
struct PriceMenu {
  Vec p;
  double c0 = 0.0;
  std::string method;  // "exact-enumeration" | "monte-carlo"
  long samples = 0;
  Vec se;              // per-entry standard error; zeros for exact
  bool continuous_law = false;
  Vec x;
};

PriceMenu price_menu(const Vec& x, double c0, const ScenarioSet& sc, int workers);
PriceMenu price_menu(const Vec& x, const MarketConfig& cfg, const SupplyModel& model,
                     const EvalBudget& budget);

// Max over k of |p_k/c0 + P(no deadline in [k, N] ends exhausted) - 1|,
// both terms measured on the same scenario set. Near zero by construction;
// exposed so audits can pin it.
double partition_gap(const Vec& x, double c0, const ScenarioSet& sc, int workers);

// Finite-difference probe of the price identity p_k = dQ*/dx_k.
struct StepSpec {
  double value = 1e-2;
  bool relative = true;  // h_k = value * x_k when true, h_k = value otherwise
};

struct GradCoord {
  int deadline = 0;    // class k, 1-based
  double h = 0.0;      // step actually used
  double fd = 0.0;     // central difference of the firm-cost estimate
  double price = 0.0;  // menu entry p_k
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  bool skipped = false;  // x_k == 0: cost is kinked there, probe is meaningless
};

struct GradCheckReport {
  Vec x;
  double c0 = 0.0;
  StepSpec step;
  std::string method;
  long samples = 0;
  std::vector<GradCoord> coords;
  double max_rel_gap = 0.0;  // over coordinates actually probed
};

// Central differences and the menu are evaluated on one shared scenario set,
// so sampling noise cancels to first order. Throws Error "gradcheck.step"
// unless step.value > 0.
GradCheckReport grad_check(const Vec& x, const MarketConfig& cfg,
                           const SupplyModel& model, const StepSpec& step,
                           const EvalBudget& budget);

// Midpoint-convexity sweep of the firm-cost surface over random bundle pairs
// drawn from [0, box]^N. Violations beyond tol get counted, the worst one
// reported.
struct ConvexityReport {
  int trials = 0;
  int violations = 0;
  double max_violation = 0.0;  // Q(mid) - (Q(a) + Q(b)) / 2, positive is bad
  double tolerance = 0.0;
};

ConvexityReport convexity_probe(const MarketConfig& cfg, const SupplyModel& model,
                                int trials, double box, double tol,
                                const EvalBudget& budget);

}  // namespace ddp
