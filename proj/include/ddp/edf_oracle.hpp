#pragma once

#include <cstddef>

#include "ddp/common.hpp"
#include "ddp/pricing.hpp"
#include "ddp/supply.hpp"

namespace ddp {

// Brute-force optimality check for the deadline-order dispatch rule.
//
// On an integer-valued instance (small demands, enumerable supply whose
// values are integers) the expected firm cost of EVERY feasible dispatch
// policy can be minimized exactly by dynamic programming over the scenario
// tree. Policies here may condition on the entire observed supply history,
// may leave supply unused, and may buy firm energy early for future classes,
// so the space strictly contains everything the greedy rule can do. The
// check passes when the greedy rule's expected cost stays within tol of the
// DP minimum.
struct OracleReport {
  double edf_cost = 0.0;  // expected firm cost of the shipped dispatch rule
  double dp_cost = 0.0;   // exhaustive-policy minimum
  double gap = 0.0;       // edf_cost - dp_cost (>= -rounding when optimal)
  double tolerance = 0.0;
  bool pass = false;      // edf_cost <= dp_cost + tolerance
  long scenarios = 0;
  std::size_t states = 0;  // memoized (period, history, demand-state) triples
};

// Throws Error "oracle.grid" unless every demand and supply value is a small
// nonnegative integer (the exactness of the DP depends on it), and
// "supply.enumerate.unsupported" for continuous supply models.
OracleReport edf_optimality_check(const Vec& x, const MarketConfig& cfg,
                                  const SupplyModel& model, double tol = 1e-9);

}  // namespace ddp
