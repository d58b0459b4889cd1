#include "ddp/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "ddp/parallel.hpp"
#include "ddp/rng.hpp"
#include "ddp/scheduler.hpp"

namespace ddp {

EvalBudget auto_budget(const SupplyModel& model, long samples, std::uint64_t seed,
                       int workers) {
  EvalBudget b;
  b.exact = enumerable(model);
  b.samples = samples;
  b.seed = seed;
  b.workers = workers;
  return b;
}

ScenarioSet realize_scenarios(const SupplyModel& model, const EvalBudget& budget) {
  ModelCheck check = validate_model(model);
  if (!check.result.ok())
    throw Error("supply.invalid", "supply model failed validation: " +
                                      check.result.violations.front());
  ScenarioSet sc;
  sc.continuous_law = check.continuous_law;
  if (budget.exact) {
    ScenarioList list = enumerate_scenarios(model);  // throws when continuous
    sc.paths = std::move(list.paths);
    sc.weights = std::move(list.weights);
    sc.exact = true;
    return sc;
  }
  if (budget.samples < 1)
    throw Error("budget.samples", "sample budget must be >= 1");
  std::size_t m = std::size_t(budget.samples);
  sc.paths.assign(m, Vec());
  sc.weights.assign(m, 1.0 / double(m));
  sc.exact = false;
  parallel_for(m, budget.workers, [&](std::size_t i) {
    Rng rng(child_seed(budget.seed, i));
    sc.paths[i] = sample_path(model, rng);
  });
  return sc;
}

namespace {

void require_bundle(const Vec& x, const ScenarioSet& sc) {
  if (sc.paths.empty()) throw Error("scenario.empty", "empty scenario set");
  if (x.size() != sc.paths[0].size())
    throw Error("pricing.shape", "bundle length does not match scenario horizon");
  for (double q : x)
    if (!std::isfinite(q))
      throw Error("pricing.bundle", "bundle entries must be finite");
}

double scenario_firm_cost(const Vec& x, double c0, const Vec& path) {
  Vec xi = residual_trace(x, path);
  double firm = 0.0;
  for (std::size_t t = 1; t < xi.size(); ++t)
    if (xi[t] < 0.0) firm -= xi[t];
  return c0 * firm;
}

// Last deadline whose surplus process is exhausted (xi_t <= 0); 0 when the
// path keeps every deadline strictly in surplus.
int last_exhausted(const Vec& x, const Vec& path) {
  Vec xi = residual_trace(x, path);
  for (int t = int(xi.size()) - 1; t >= 1; --t)
    if (xi[std::size_t(t)] <= 0.0) return t;
  return 0;
}

}  // namespace

CostEstimate expected_firm_cost(const Vec& x, double c0, const ScenarioSet& sc,
                                int workers) {
  require_bundle(x, sc);
  std::size_t m = sc.paths.size();
  Vec cost(m, 0.0);
  parallel_for(m, workers, [&](std::size_t i) {
    cost[i] = scenario_firm_cost(x, c0, sc.paths[i]);
  });
  double mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) mean += sc.weights[i] * cost[i];

  CostEstimate out;
  out.value = mean;
  out.samples = long(m);
  if (sc.exact) {
    out.method = "exact-enumeration";
    out.se = 0.0;
  } else {
    out.method = "monte-carlo";
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double d = cost[i] - mean;
      ss += d * d;
    }
    out.se = m > 1 ? std::sqrt(ss / double(m - 1) / double(m)) : 0.0;
  }
  return out;
}

CostEstimate expected_firm_cost(const Vec& x, const MarketConfig& cfg,
                                const SupplyModel& model, const EvalBudget& budget) {
  ScenarioSet sc = realize_scenarios(model, budget);
  return expected_firm_cost(x, cfg.c0, sc, budget.workers);
}

PriceMenu price_menu(const Vec& x, double c0, const ScenarioSet& sc, int workers) {
  require_bundle(x, sc);
  const int n = int(x.size());
  std::size_t m = sc.paths.size();
  std::vector<int> last(m, 0);
  parallel_for(m, workers, [&](std::size_t i) {
    last[i] = last_exhausted(x, sc.paths[i]);
  });

  // tally[t] = probability mass of paths whose last exhausted deadline is t.
  Vec tally(std::size_t(n) + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) tally[std::size_t(last[i])] += sc.weights[i];

  // Suffix sums, then normalize by the identically-ordered total. Suffix sums
  // of nonnegative terms never decrease as k drops and the correctly rounded
  // divide keeps every ratio in [0, 1], which is what makes the menu ordering
  // exact rather than approximate.
  Vec suffix(std::size_t(n) + 1, 0.0);
  double acc = 0.0;
  for (int t = n; t >= 1; --t) {
    acc += tally[std::size_t(t)];
    suffix[std::size_t(t)] = acc;
  }
  double total = acc + tally[0];

  PriceMenu menu;
  menu.x = x;
  menu.c0 = c0;
  menu.continuous_law = sc.continuous_law;
  menu.samples = long(m);
  menu.method = sc.exact ? "exact-enumeration" : "monte-carlo";
  menu.p.resize(std::size_t(n));
  menu.se.assign(std::size_t(n), 0.0);
  for (int k = 1; k <= n; ++k) {
    double ratio = suffix[std::size_t(k)] / total;
    menu.p[std::size_t(k - 1)] = c0 * ratio;
    if (!sc.exact)
      menu.se[std::size_t(k - 1)] =
          c0 * std::sqrt(std::max(0.0, ratio * (1.0 - ratio)) / double(m));
  }
  return menu;
}

PriceMenu price_menu(const Vec& x, const MarketConfig& cfg, const SupplyModel& model,
                     const EvalBudget& budget) {
  ScenarioSet sc = realize_scenarios(model, budget);
  return price_menu(x, cfg.c0, sc, budget.workers);
}

double partition_gap(const Vec& x, double c0, const ScenarioSet& sc, int workers) {
  PriceMenu menu = price_menu(x, c0, sc, workers);
  const int n = int(x.size());
  std::size_t m = sc.paths.size();
  std::vector<int> last(m, 0);
  parallel_for(m, workers, [&](std::size_t i) {
    last[i] = last_exhausted(x, sc.paths[i]);
  });
  double total = 0.0;
  for (double w : sc.weights) total += w;

  double worst = 0.0;
  for (int k = 1; k <= n; ++k) {
    // Mass of paths that stay in surplus at every deadline from k on.
    double never = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (last[i] < k) never += sc.weights[i];
    double gap = std::abs(menu.p[std::size_t(k - 1)] / c0 + never / total - 1.0);
    worst = std::max(worst, gap);
  }
  return worst;
}

GradCheckReport grad_check(const Vec& x, const MarketConfig& cfg,
                           const SupplyModel& model, const StepSpec& step,
                           const EvalBudget& budget) {
  if (!(step.value > 0.0))
    throw Error("gradcheck.step", "finite-difference step must be > 0");
  ScenarioSet sc = realize_scenarios(model, budget);
  PriceMenu menu = price_menu(x, cfg.c0, sc, budget.workers);

  GradCheckReport rep;
  rep.x = x;
  rep.c0 = cfg.c0;
  rep.step = step;
  rep.method = menu.method;
  rep.samples = menu.samples;

  const int n = int(x.size());
  for (int k = 0; k < n; ++k) {
    GradCoord gc;
    gc.deadline = k + 1;
    gc.price = menu.p[std::size_t(k)];
    if (x[std::size_t(k)] <= 0.0) {
      gc.skipped = true;
      rep.coords.push_back(gc);
      continue;
    }
    double h = step.relative ? step.value * x[std::size_t(k)] : step.value;
    // Keep the probe inside the nonnegative orthant.
    if (h >= x[std::size_t(k)]) h = 0.5 * x[std::size_t(k)];
    gc.h = h;
    Vec hi = x, lo = x;
    hi[std::size_t(k)] += h;
    lo[std::size_t(k)] -= h;
    double up = expected_firm_cost(hi, cfg.c0, sc, budget.workers).value;
    double dn = expected_firm_cost(lo, cfg.c0, sc, budget.workers).value;
    gc.fd = (up - dn) / (2.0 * h);
    gc.abs_gap = std::abs(gc.fd - gc.price);
    gc.rel_gap = gc.abs_gap / std::max(std::abs(gc.price), 1e-9);
    rep.max_rel_gap = std::max(rep.max_rel_gap, gc.rel_gap);
    rep.coords.push_back(gc);
  }
  return rep;
}

ConvexityReport convexity_probe(const MarketConfig& cfg, const SupplyModel& model,
                                int trials, double box, double tol,
                                const EvalBudget& budget) {
  if (trials < 1) throw Error("convexity.trials", "trial count must be >= 1");
  if (!(box > 0.0)) throw Error("convexity.box", "bundle box must be > 0");
  ScenarioSet sc = realize_scenarios(model, budget);

  ConvexityReport rep;
  rep.trials = trials;
  rep.tolerance = tol;
  const int n = model.periods;
  for (int t = 0; t < trials; ++t) {
    Rng rng(child_seed(budget.seed ^ 0xC0117E57ULL, std::uint64_t(t)));
    Vec a(std::size_t(n), 0.0), b(std::size_t(n), 0.0), mid(std::size_t(n), 0.0);
    for (int k = 0; k < n; ++k) {
      a[std::size_t(k)] = rng.uniform(0.0, box);
      b[std::size_t(k)] = rng.uniform(0.0, box);
      mid[std::size_t(k)] = 0.5 * (a[std::size_t(k)] + b[std::size_t(k)]);
    }
    double qa = expected_firm_cost(a, cfg.c0, sc, budget.workers).value;
    double qb = expected_firm_cost(b, cfg.c0, sc, budget.workers).value;
    double qm = expected_firm_cost(mid, cfg.c0, sc, budget.workers).value;
    double violation = qm - 0.5 * (qa + qb);
    rep.max_violation = std::max(rep.max_violation, violation);
    if (violation > tol) ++rep.violations;
  }
  return rep;
}

}  // namespace ddp
