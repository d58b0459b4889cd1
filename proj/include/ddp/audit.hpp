#pragma once

#include <string>
#include <vector>

#include "ddp/common.hpp"
#include "ddp/population.hpp"
#include "ddp/pricing.hpp"
#include "ddp/supply.hpp"

namespace ddp {

struct PayoffEstimate {
  double value = 0.0;
  double se = 0.0;
  std::string method;
  long samples = 0;
};

// Deterministic payoff of requesting the full demand at the true deadline:
// delivery by then is guaranteed, so no simulation enters.
double truthful_payoff(const ConsumerType& t, const PriceMenu& menu);

// Expected payoff of a zero-mass consumer of type t playing action a while
// the aggregate bundle stays fixed at x: E[U(energy delivered by the true
// deadline)] minus the menu payment p'a. The menu is priced at x once; a
// massless deviation cannot move it.
PayoffEstimate deviation_payoff(const ConsumerType& t, const Vec& a, const Vec& x,
                                const PriceMenu& menu, const ScenarioSet& sc,
                                int workers);
PayoffEstimate deviation_payoff(const ConsumerType& t, const Vec& a, const Vec& x,
                                const MarketConfig& cfg, const SupplyModel& model,
                                const EvalBudget& budget);

// Deviation search grid: every action with per-class quantities from
// {0, q/steps, 2q/steps, ..., q} whose total stays within `cap`.
struct DeviationGrid {
  int steps = 8;
  double cap = 0.0;  // total-request bound; population max demand by default
};

struct PayoffReport {
  std::string label;
  int deadline = 0;
  double truthful = 0.0;
  Vec best_deviation;       // empty when the grid held no admissible action
  double best_payoff = 0.0;
  double best_se = 0.0;
  double gap = 0.0;          // truthful - best deviation payoff
  double slack = 0.0;        // tolerance the gap is judged against
  long grid_actions = 0;     // deviations evaluated (truthful point excluded)
  int grid_steps = 0;
  double grid_cap = 0.0;
  bool exact = false;
  bool inconclusive = false;  // sampled audit whose |gap| is inside 3 stderr
};

// Exhaustive grid search for a profitable deviation. Exact-enumeration
// supplies share one scenario list across the grid; sampled audits give each
// deviation its own child-seeded draw so parallel order cannot matter.
PayoffReport ic_audit(const ConsumerType& t, const Vec& x, const MarketConfig& cfg,
                      const SupplyModel& model, const DeviationGrid& grid,
                      const EvalBudget& budget);

struct FocProbe {
  Vec y;
  double slack_value = 0.0;  // (p - grad)'(x* - y); negative is a violation
};

struct EquilibriumReport {
  Vec x_star;
  PriceMenu menu;
  double welfare = 0.0;
  double welfare_se = 0.0;
  double utility_total = 0.0;       // sum of mass * U(q)
  double cost = 0.0;                // expected firm cost at x_star
  bool rates_cover_firm_price = true;  // every audited type has R >= c0
  bool advisory = false;            // set when the rate gate fails
  double foc_residual = 0.0;        // max violation over probe directions
  int foc_directions = 0;
  std::vector<int> foc_skipped;     // deadlines with x*_k = 0, left out
  std::vector<PayoffReport> ic_entries;
  std::vector<PayoffReport> ic_probes;
  double min_gap = 0.0;             // worst IC gap across audited types
};

// Prices the truthful aggregate, audits every entry and probe type against
// the deviation grid, probes the supplier first-order condition along a
// deterministic direction fan, and reports realized welfare.
EquilibriumReport equilibrium_check(const Population& pop, const MarketConfig& cfg,
                                    const SupplyModel& model,
                                    const DeviationGrid& grid,
                                    const EvalBudget& budget);

// Realized welfare of serving bundle x: every type's fill scales with its
// class, x_c / x*_c, so utilities are evaluated at q times that ratio.
// Demand appearing in a class no entry requested earns nothing.
CostEstimate social_welfare(const Population& pop, const Vec& x,
                            const MarketConfig& cfg, const SupplyModel& model,
                            const EvalBudget& budget);

// Type-resolved variant: scales[i] multiplies entry i's request.
CostEstimate social_welfare_scaled(const Population& pop, const Vec& scales,
                                   const MarketConfig& cfg, const SupplyModel& model,
                                   const EvalBudget& budget);

}  // namespace ddp
