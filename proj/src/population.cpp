#include "ddp/population.hpp"

#include <algorithm>
#include <cmath>

namespace ddp {

namespace {

double staircase_value(const UtilitySpec& u, double y) {
  // Right-continuous: the step at `at[i]` pays from y == at[i] onward.
  double v = 0.0;
  for (std::size_t i = 0; i < u.at.size(); ++i) {
    if (y >= u.at[i]) v = u.value[i];
    else break;
  }
  return v;
}

double piecewise_value(const UtilitySpec& u, double y) {
  const Vec& xs = u.at;
  const Vec& vs = u.value;
  if (y <= xs.front()) return vs.front();
  if (y >= xs.back()) return vs.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), y);
  std::size_t hi = std::size_t(it - xs.begin());
  std::size_t lo = hi - 1;
  double w = (y - xs[lo]) / (xs[hi] - xs[lo]);
  return vs[lo] + w * (vs[hi] - vs[lo]);
}

}  // namespace

double utility_value(const ConsumerType& t, double y) {
  if (!(y >= 0.0))
    throw Error("utility.domain", "utility evaluated at negative quantity y=" +
                                      std::to_string(y));
  double full = t.rate * t.demand;
  switch (t.utility.family) {
    case UtilityFamily::CappedLinear:
      return t.rate * std::min(y, t.demand);
    case UtilityFamily::Step:
      return y >= t.demand ? full : 0.0;
    case UtilityFamily::Staircase:
      return y >= t.demand ? full : staircase_value(t.utility, y);
    case UtilityFamily::PiecewiseLinear:
      return y >= t.demand ? full : piecewise_value(t.utility, y);
  }
  throw Error("utility.family", "unknown utility family");
}

ValidationResult validate_type(const ConsumerType& t, int periods) {
  ValidationResult r;
  if (t.deadline < 1 || t.deadline > periods)
    r.fail("deadline " + std::to_string(t.deadline) + " outside [1, " +
           std::to_string(periods) + "]");
  if (!(std::isfinite(t.demand) && t.demand > 0.0)) r.fail("demand q must be > 0");
  if (!(std::isfinite(t.rate) && t.rate > 0.0)) r.fail("rate R must be > 0");
  if (!(std::isfinite(t.mass) && t.mass >= 0.0)) r.fail("mass must be >= 0");
  if (!r.ok()) return r;

  const UtilitySpec& u = t.utility;
  bool tabulated = u.family == UtilityFamily::Staircase ||
                   u.family == UtilityFamily::PiecewiseLinear;
  if (tabulated) {
    if (u.at.size() != u.value.size() || u.at.empty()) {
      r.fail("utility table needs matching nonempty abscissa/value lists");
      return r;
    }
    for (std::size_t i = 0; i < u.at.size(); ++i) {
      if (!std::isfinite(u.at[i]) || !std::isfinite(u.value[i]) || u.at[i] < 0.0 ||
          u.value[i] < 0.0)
        r.fail("utility table entry " + std::to_string(i) +
               " must be finite and nonnegative");
      if (i > 0 && !(u.at[i] > u.at[i - 1]))
        r.fail("utility table abscissae must be strictly increasing at entry " +
               std::to_string(i));
      if (i > 0 && u.value[i] < u.value[i - 1])
        r.fail("utility must be nondecreasing; table value drops at entry " +
               std::to_string(i));
      if (u.at[i] > t.demand + 1e-12 * std::max(1.0, t.demand))
        r.fail("utility table abscissa " + std::to_string(i) +
               " exceeds demand q");
    }
    if (u.family == UtilityFamily::PiecewiseLinear &&
        !(near(u.at.front(), 0.0, 0.0) && near(u.value.front(), 0.0, 0.0)))
      r.fail("piecewise-linear utility must start at (0, 0)");
    double full = t.rate * t.demand;
    if (!near(u.at.back(), t.demand, 1e-12 * std::max(1.0, t.demand)) ||
        !near(u.value.back(), full, 1e-9 * std::max(1.0, full)))
      r.fail("utility table must end at (q, R*q)");
    if (!r.ok()) return r;
  }

  // Cap and endpoint checks on the table nodes plus a dense grid.
  double full = t.rate * t.demand;
  double tol = 1e-9 * std::max(1.0, full);
  auto check_point = [&](double y) {
    double v = utility_value(t, y);
    if (v > t.rate * y + tol)
      r.fail("cap violated at y=" + std::to_string(y) + ": U=" + std::to_string(v) +
             " > R*y=" + std::to_string(t.rate * y));
  };
  for (int i = 0; i <= 1000; ++i) check_point(t.demand * double(i) / 1000.0);
  if (tabulated)
    for (double a : u.at) check_point(std::min(a, t.demand));
  double at_q = utility_value(t, t.demand);
  if (!near(at_q, full, tol))
    r.fail("U(q)=" + std::to_string(at_q) + " must equal R*q=" + std::to_string(full));
  // No residual value above the full request.
  if (!near(utility_value(t, 1.5 * t.demand), full, tol))
    r.fail("U must be constant above q");
  return r;
}

ValidationResult validate_population(const Population& pop, int periods) {
  ValidationResult r;
  double total_mass = 0.0;
  for (std::size_t i = 0; i < pop.entries.size(); ++i) {
    const ConsumerType& t = pop.entries[i];
    r.merge(validate_type(t, periods), "entry " + std::to_string(i) + ": ");
    if (!(t.mass > 0.0))
      r.fail("entry " + std::to_string(i) + ": mass must be > 0");
    total_mass += std::max(t.mass, 0.0);
  }
  if (!pop.entries.empty() && !near(total_mass, 1.0, 1e-12))
    r.fail("entry masses sum to " + std::to_string(total_mass) +
           ", expected 1 within 1e-12");
  for (std::size_t i = 0; i < pop.probes.size(); ++i) {
    const ConsumerType& t = pop.probes[i];
    r.merge(validate_type(t, periods), "probe " + std::to_string(i) + ": ");
    if (t.mass != 0.0) r.fail("probe " + std::to_string(i) + ": mass must be 0");
  }
  return r;
}

Vec truthful_action(const ConsumerType& t, int periods) {
  if (t.deadline < 1 || t.deadline > periods)
    throw Error("population.deadline", "deadline outside horizon");
  Vec a(std::size_t(periods), 0.0);
  a[std::size_t(t.deadline - 1)] = t.demand;
  return a;
}

Vec aggregate_truthful(const Population& pop, int periods) {
  Vec x(periods, 0.0);
  for (const ConsumerType& t : pop.entries)
    x[std::size_t(t.deadline - 1)] += t.mass * t.demand;
  return x;
}

Vec aggregate_actions(const Population& pop, const std::vector<Vec>& actions,
                      int periods) {
  if (actions.size() != pop.entries.size())
    throw Error("population.shape", "one action per entry required");
  Vec x(std::size_t(periods), 0.0);
  for (std::size_t e = 0; e < actions.size(); ++e) {
    if (int(actions[e].size()) != periods)
      throw Error("population.shape", "action " + std::to_string(e) +
                                          " must have one slot per class");
    for (int k = 0; k < periods; ++k)
      x[std::size_t(k)] += pop.entries[e].mass * actions[e][std::size_t(k)];
  }
  return x;
}

double max_demand(const Population& pop) {
  double q = 0.0;
  for (const ConsumerType& t : pop.entries) q = std::max(q, t.demand);
  for (const ConsumerType& t : pop.probes) q = std::max(q, t.demand);
  return q;
}

namespace {
ConsumerType base_type(int deadline, double rate, double demand, double mass,
                       std::string label) {
  ConsumerType t;
  t.deadline = deadline;
  t.rate = rate;
  t.demand = demand;
  t.mass = mass;
  t.label = std::move(label);
  return t;
}
}  // namespace

ConsumerType make_capped_linear(int deadline, double rate, double demand,
                                double mass, std::string label) {
  ConsumerType t = base_type(deadline, rate, demand, mass, std::move(label));
  t.utility.family = UtilityFamily::CappedLinear;
  return t;
}

ConsumerType make_step(int deadline, double rate, double demand, double mass,
                       std::string label) {
  ConsumerType t = base_type(deadline, rate, demand, mass, std::move(label));
  t.utility.family = UtilityFamily::Step;
  return t;
}

ConsumerType make_staircase(int deadline, double rate, double demand, double mass,
                            Vec at, Vec value, std::string label) {
  ConsumerType t = base_type(deadline, rate, demand, mass, std::move(label));
  t.utility.family = UtilityFamily::Staircase;
  t.utility.at = std::move(at);
  t.utility.value = std::move(value);
  return t;
}

ConsumerType make_piecewise_linear(int deadline, double rate, double demand,
                                   double mass, Vec at, Vec value,
                                   std::string label) {
  ConsumerType t = base_type(deadline, rate, demand, mass, std::move(label));
  t.utility.family = UtilityFamily::PiecewiseLinear;
  t.utility.at = std::move(at);
  t.utility.value = std::move(value);
  return t;
}

}  // namespace ddp
