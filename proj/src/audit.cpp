#include "ddp/audit.hpp"

#include <algorithm>
#include <cmath>

#include "ddp/parallel.hpp"
#include "ddp/rng.hpp"
#include "ddp/scheduler.hpp"

namespace ddp {

namespace {

void require_action(const Vec& a, int n) {
  if (int(a.size()) != n)
    throw Error("audit.action", "action must have one slot per deadline class");
  for (double q : a)
    if (!(std::isfinite(q) && q >= 0.0))
      throw Error("audit.action", "action quantities must be >= 0");
}

// Energy of action `a` that arrives by deadline `k` on one supply path:
// classes up to k are guaranteed, later classes count only when the dispatch
// leaves surplus early enough for their marginal unit.
double delivered_by_deadline(const std::vector<MarginalService>& ms, const Vec& a,
                             int k) {
  double got = 0.0;
  for (int c = 0; c < int(a.size()); ++c)
    if (ms[std::size_t(c)].period < k) got += a[std::size_t(c)];
  return got;
}

}  // namespace

double truthful_payoff(const ConsumerType& t, const PriceMenu& menu) {
  if (t.deadline < 1 || t.deadline > int(menu.p.size()))
    throw Error("audit.deadline", "type deadline outside the menu horizon");
  return utility_value(t, t.demand) - menu.p[std::size_t(t.deadline - 1)] * t.demand;
}

PayoffEstimate deviation_payoff(const ConsumerType& t, const Vec& a, const Vec& x,
                                const PriceMenu& menu, const ScenarioSet& sc,
                                int workers) {
  const int n = int(x.size());
  require_action(a, n);
  if (int(menu.p.size()) != n)
    throw Error("audit.menu", "menu length does not match the horizon");

  double payment = 0.0;
  for (int c = 0; c < n; ++c) payment += menu.p[std::size_t(c)] * a[std::size_t(c)];

  std::size_t m = sc.paths.size();
  Vec util(m, 0.0);
  parallel_for(m, workers, [&](std::size_t i) {
    ScheduleTrace tr = simulate(x, sc.paths[i]);
    std::vector<MarginalService> ms = marginal_service(tr);
    util[i] = utility_value(t, delivered_by_deadline(ms, a, t.deadline));
  });

  double mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) mean += sc.weights[i] * util[i];

  PayoffEstimate out;
  out.value = mean - payment;
  out.samples = long(m);
  if (sc.exact) {
    out.method = "exact-enumeration";
  } else {
    out.method = "monte-carlo";
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double d = util[i] - mean;
      ss += d * d;
    }
    out.se = m > 1 ? std::sqrt(ss / double(m - 1) / double(m)) : 0.0;
  }
  return out;
}

PayoffEstimate deviation_payoff(const ConsumerType& t, const Vec& a, const Vec& x,
                                const MarketConfig& cfg, const SupplyModel& model,
                                const EvalBudget& budget) {
  ScenarioSet sc = realize_scenarios(model, budget);
  PriceMenu menu = price_menu(x, cfg.c0, sc, budget.workers);
  return deviation_payoff(t, a, x, menu, sc, budget.workers);
}

namespace {

// All grid actions in lexicographic index order, truthful point excluded.
std::vector<Vec> grid_actions(const ConsumerType& t, int n,
                              const DeviationGrid& grid) {
  std::vector<Vec> out;
  std::vector<int> idx(std::size_t(n), 0);
  double step = t.demand / double(grid.steps);
  double cap = grid.cap + 1e-9 * std::max(1.0, grid.cap);
  while (true) {
    double total = 0.0;
    for (int c = 0; c < n; ++c) total += double(idx[std::size_t(c)]) * step;
    bool truthful = true;
    for (int c = 0; c < n; ++c) {
      int want = (c == t.deadline - 1) ? grid.steps : 0;
      if (idx[std::size_t(c)] != want) truthful = false;
    }
    if (total <= cap && !truthful) {
      Vec a(std::size_t(n), 0.0);
      for (int c = 0; c < n; ++c) a[std::size_t(c)] = double(idx[std::size_t(c)]) * step;
      out.push_back(std::move(a));
    }
    int c = n - 1;
    while (c >= 0 && idx[std::size_t(c)] == grid.steps) {
      idx[std::size_t(c)] = 0;
      --c;
    }
    if (c < 0) break;
    ++idx[std::size_t(c)];
  }
  return out;
}

}  // namespace

PayoffReport ic_audit(const ConsumerType& t, const Vec& x, const MarketConfig& cfg,
                      const SupplyModel& model, const DeviationGrid& grid,
                      const EvalBudget& budget) {
  if (grid.steps < 1) throw Error("audit.grid", "grid needs at least one step");
  if (!(grid.cap > 0.0)) throw Error("audit.grid", "grid cap must be > 0");
  const int n = cfg.periods;

  PayoffReport rep;
  rep.label = t.label;
  rep.deadline = t.deadline;
  rep.grid_steps = grid.steps;
  rep.grid_cap = grid.cap;
  rep.exact = budget.exact;

  // The menu is priced once at x; deviations are massless and cannot move it.
  ScenarioSet shared = realize_scenarios(model, budget);
  PriceMenu menu = price_menu(x, cfg.c0, shared, budget.workers);
  rep.truthful = truthful_payoff(t, menu);

  std::vector<Vec> actions = grid_actions(t, n, grid);
  rep.grid_actions = long(actions.size());

  std::vector<PayoffEstimate> payoff(actions.size());
  if (budget.exact) {
    // One enumerated scenario list serves every deviation.
    parallel_for(actions.size(), budget.workers, [&](std::size_t d) {
      payoff[d] = deviation_payoff(t, actions[d], x, menu, shared, 1);
    });
  } else {
    // Each deviation draws its own child-seeded sample set, so the audit is
    // reproducible for any parallel schedule.
    parallel_for(actions.size(), budget.workers, [&](std::size_t d) {
      EvalBudget own = budget;
      own.seed = child_seed(budget.seed, d);
      own.workers = 1;
      ScenarioSet sc = realize_scenarios(model, own);
      payoff[d] = deviation_payoff(t, actions[d], x, menu, sc, 1);
    });
  }

  std::size_t best = actions.size();
  for (std::size_t d = 0; d < actions.size(); ++d)
    if (best == actions.size() || payoff[d].value > payoff[best].value) best = d;

  if (best < actions.size()) {
    rep.best_deviation = actions[best];
    rep.best_payoff = payoff[best].value;
    rep.best_se = payoff[best].se;
    rep.gap = rep.truthful - rep.best_payoff;
  } else {
    rep.gap = 0.0;
  }
  rep.slack = budget.exact ? 1e-9 : std::max(1e-9, 3.0 * rep.best_se);
  rep.inconclusive = !budget.exact && std::abs(rep.gap) <= 3.0 * rep.best_se;
  return rep;
}

EquilibriumReport equilibrium_check(const Population& pop, const MarketConfig& cfg,
                                    const SupplyModel& model,
                                    const DeviationGrid& grid,
                                    const EvalBudget& budget) {
  const int n = cfg.periods;
  EquilibriumReport rep;
  rep.x_star = aggregate_truthful(pop, n);

  ScenarioSet sc = realize_scenarios(model, budget);
  rep.menu = price_menu(rep.x_star, cfg.c0, sc, budget.workers);

  for (const ConsumerType& t : pop.entries)
    if (t.rate < cfg.c0) rep.rates_cover_firm_price = false;
  for (const ConsumerType& t : pop.probes)
    if (t.rate < cfg.c0) rep.rates_cover_firm_price = false;
  rep.advisory = !rep.rates_cover_firm_price;

  CostEstimate cost = expected_firm_cost(rep.x_star, cfg.c0, sc, budget.workers);
  rep.cost = cost.value;
  for (const ConsumerType& t : pop.entries)
    rep.utility_total += t.mass * utility_value(t, t.demand);
  rep.welfare = rep.utility_total - cost.value;
  rep.welfare_se = cost.se;

  DeviationGrid g = grid;
  if (!(g.cap > 0.0)) g.cap = max_demand(pop);
  bool first = true;
  auto audit_one = [&](const ConsumerType& t, std::vector<PayoffReport>& sink) {
    PayoffReport pr = ic_audit(t, rep.x_star, cfg, model, g, budget);
    if (first || pr.gap < rep.min_gap) rep.min_gap = pr.gap;
    first = false;
    sink.push_back(std::move(pr));
  };
  for (const ConsumerType& t : pop.entries) audit_one(t, rep.ic_entries);
  for (const ConsumerType& t : pop.probes) audit_one(t, rep.ic_probes);

  // Supplier first-order condition along a deterministic fan of directions:
  // the price menu net of the marginal cost gradient should not admit any
  // feasible improvement away from x*.
  StepSpec step;  // 1e-2 relative central differences
  GradCheckReport gr = grad_check(rep.x_star, cfg, model, step, budget);
  std::vector<Vec> dirs;
  dirs.push_back(Vec(std::size_t(n), 0.0));  // retire the whole bundle
  Vec doubled = rep.x_star;
  for (double& q : doubled) q *= 2.0;
  dirs.push_back(doubled);
  for (int k = 0; k < n; ++k) {
    Vec up = rep.x_star, dn = rep.x_star;
    up[std::size_t(k)] *= 2.0;
    dn[std::size_t(k)] = 0.0;
    dirs.push_back(up);
    dirs.push_back(dn);
  }
  for (int r = 0; r < 8; ++r) {
    Rng rng(child_seed(budget.seed ^ 0xF0C5EEDULL, std::uint64_t(r)));
    Vec y(std::size_t(n), 0.0);
    double hi = 0.0;
    for (double q : rep.x_star) hi = std::max(hi, q);
    if (hi <= 0.0) hi = 1.0;
    for (int k = 0; k < n; ++k) y[std::size_t(k)] = rng.uniform(0.0, 2.0 * hi);
    dirs.push_back(std::move(y));
  }
  rep.foc_directions = int(dirs.size());
  for (const GradCoord& gc : gr.coords)
    if (gc.skipped) rep.foc_skipped.push_back(gc.deadline);
  for (const Vec& y : dirs) {
    double margin = 0.0;
    for (int k = 0; k < n; ++k) {
      const GradCoord& gc = gr.coords[std::size_t(k)];
      if (gc.skipped) continue;  // boundary coordinate, gradient undefined
      margin += (rep.menu.p[std::size_t(k)] - gc.fd) *
                (rep.x_star[std::size_t(k)] - y[std::size_t(k)]);
    }
    rep.foc_residual = std::max(rep.foc_residual, -margin);
  }
  return rep;
}

CostEstimate social_welfare_scaled(const Population& pop, const Vec& scales,
                                   const MarketConfig& cfg, const SupplyModel& model,
                                   const EvalBudget& budget) {
  const int n = cfg.periods;
  if (scales.size() != pop.entries.size())
    throw Error("welfare.shape", "one scale per entry required");
  Vec x(std::size_t(n), 0.0);
  double utility = 0.0;
  for (std::size_t e = 0; e < pop.entries.size(); ++e) {
    const ConsumerType& t = pop.entries[e];
    if (!(std::isfinite(scales[e]) && scales[e] >= 0.0))
      throw Error("welfare.scale", "scales must be >= 0");
    x[std::size_t(t.deadline - 1)] += t.mass * t.demand * scales[e];
    utility += t.mass * utility_value(t, t.demand * scales[e]);
  }
  CostEstimate cost = expected_firm_cost(x, cfg, model, budget);
  CostEstimate out;
  out.value = utility - cost.value;
  out.se = cost.se;
  out.method = cost.method;
  out.samples = cost.samples;
  return out;
}

CostEstimate social_welfare(const Population& pop, const Vec& x,
                            const MarketConfig& cfg, const SupplyModel& model,
                            const EvalBudget& budget) {
  const int n = cfg.periods;
  if (int(x.size()) != n)
    throw Error("welfare.shape", "bundle length must match the horizon");
  Vec x_star = aggregate_truthful(pop, n);
  double utility = 0.0;
  for (const ConsumerType& t : pop.entries) {
    std::size_t c = std::size_t(t.deadline - 1);
    double scale;
    if (x_star[c] > 0.0)
      scale = x[c] / x_star[c];
    else if (x[c] == 0.0)
      scale = 1.0;  // nothing requested, nothing served
    else
      scale = 0.0;  // class energy nobody requested earns no utility
    utility += t.mass * utility_value(t, t.demand * scale);
  }
  CostEstimate cost = expected_firm_cost(x, cfg, model, budget);
  CostEstimate out;
  out.value = utility - cost.value;
  out.se = cost.se;
  out.method = cost.method;
  out.samples = cost.samples;
  return out;
}

}  // namespace ddp
