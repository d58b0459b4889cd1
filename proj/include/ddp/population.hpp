#pragma once

#include <string>
#include <vector>

#include "ddp/common.hpp"

namespace ddp {

// Valuation over delivered-by-deadline energy. All families satisfy
// U(0) = 0, U nondecreasing, U(y) <= R*y, and U(y) = R*q for y >= q,
// so R is always the average value of a full fill: R = U(q)/q.
enum class UtilityFamily { CappedLinear, Step, Staircase, PiecewiseLinear };

struct UtilitySpec {
  UtilityFamily family = UtilityFamily::CappedLinear;
  // Staircase: right-continuous jumps, value[i] from y >= at[i] on.
  // PiecewiseLinear: interpolation nodes (at[i], value[i]).
  Vec at;
  Vec value;
};

struct ConsumerType {
  int deadline = 1;   // class j in 1..N; energy counts if delivered by period j-1
  double rate = 0.0;  // R, currency per kWh at full fill
  double demand = 0.0;  // q, kWh requested
  double mass = 0.0;    // population share; 0 for probe consumers
  UtilitySpec utility;
  std::string label;
};

struct Population {
  std::vector<ConsumerType> entries;  // mass > 0, masses sum to 1
  std::vector<ConsumerType> probes;   // mass = 0, used only by audits
};

// U_t(y). Throws Error "utility.domain" for y < 0.
double utility_value(const ConsumerType& t, double y);

// Shape checks for one type against an N-period market: deadline range,
// positive R and q, utility family well-formed, U nondecreasing, capped by
// R*y on a dense grid, and U(q) = R*q.
ValidationResult validate_type(const ConsumerType& t, int periods);

ValidationResult validate_population(const Population& pop, int periods);

// The type's whole demand placed at its true deadline, nothing elsewhere.
Vec truthful_action(const ConsumerType& t, int periods);

// Truthful aggregate: x_k = sum of mass*q over entries with deadline k.
Vec aggregate_truthful(const Population& pop, int periods);

// Mass-weighted aggregate of arbitrary per-entry actions (probes excluded).
Vec aggregate_actions(const Population& pop, const std::vector<Vec>& actions,
                      int periods);

// Largest single demand across entries and probes; caps audit action grids.
double max_demand(const Population& pop);

ConsumerType make_capped_linear(int deadline, double rate, double demand,
                                double mass, std::string label = "");
ConsumerType make_step(int deadline, double rate, double demand, double mass,
                       std::string label = "");
ConsumerType make_staircase(int deadline, double rate, double demand, double mass,
                            Vec at, Vec value, std::string label = "");
ConsumerType make_piecewise_linear(int deadline, double rate, double demand,
                                   double mass, Vec at, Vec value,
                                   std::string label = "");

}  // namespace ddp
