#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddp/audit.hpp"
#include "ddp/config.hpp"
#include "ddp/edf_oracle.hpp"
#include "ddp/population.hpp"
#include "ddp/pricing.hpp"
#include "ddp/report.hpp"
#include "ddp/rng.hpp"
#include "ddp/scheduler.hpp"

namespace {

using namespace ddp;

// Flag values shared by every subcommand; negative/empty means "keep the
// config's value".
struct Flags {
  std::string config;
  long samples = -1;
  long long seed = -1;
  int grid = -1;
  double step = -1.0;
  int workers = -1;
  std::string out;
  std::string format;
  std::string method;
  int random_x = 0;
};

void apply_flags(ExperimentConfig& cfg, const Flags& f) {
  if (f.samples >= 0) cfg.run.samples = f.samples;
  if (f.seed >= 0) cfg.run.seed = std::uint64_t(f.seed);
  if (f.grid >= 0) cfg.run.grid = f.grid;
  if (f.step > 0.0) cfg.run.step = f.step;
  if (f.workers >= 1) cfg.run.workers = f.workers;
  if (!f.format.empty()) cfg.run.format = f.format;
  if (!f.method.empty()) cfg.run.method = f.method;
}

EvalBudget make_budget(const ExperimentConfig& cfg) {
  EvalBudget b;
  b.samples = cfg.run.samples;
  b.seed = cfg.run.seed;
  b.workers = cfg.run.workers;
  if (cfg.run.method == "exact") {
    if (!enumerable(cfg.supply))
      throw Error("supply.enumerate.unsupported",
                  "exact evaluation requested for a continuous supply model");
    b.exact = true;
  } else if (cfg.run.method == "monte-carlo") {
    b.exact = false;
  } else {
    b.exact = enumerable(cfg.supply);
  }
  return b;
}

int violation_exit(const std::string& what) {
  std::cerr << "violation[" << what << "]\n";
  return 2;
}

int run_price(const ExperimentConfig& cfg, const Flags& f) {
  EvalBudget budget = make_budget(cfg);
  Vec x = aggregate_truthful(cfg.population, cfg.market.periods);
  PriceMenu menu = price_menu(x, cfg.market, cfg.supply, budget);
  write_output(render_menu(menu, cfg.run.format), f.out);
  for (std::size_t k = 1; k < menu.p.size(); ++k)
    if (menu.p[k] > menu.p[k - 1])
      return violation_exit("menu.monotonicity");
  if (!menu.p.empty() && menu.p.front() > menu.c0)
    return violation_exit("menu.bound");
  return 0;
}

int run_schedule(const ExperimentConfig& cfg, const Flags& f) {
  EvalBudget budget = make_budget(cfg);
  ScenarioSet sc = realize_scenarios(cfg.supply, budget);
  Vec x = aggregate_truthful(cfg.population, cfg.market.periods);
  std::vector<ScheduleTrace> traces;
  traces.reserve(sc.paths.size());
  for (const Vec& path : sc.paths) traces.push_back(simulate(x, path));
  write_output(render_trace(traces, cfg.run.format), f.out);
  // Cross-check: per-class firm top-ups must match the surplus process.
  for (const ScheduleTrace& tr : traces) {
    Vec xi = residual_trace(tr.x, tr.path);
    for (std::size_t c = 0; c < tr.x.size(); ++c) {
      double want = xi[c + 1] < 0.0 ? -xi[c + 1] : 0.0;
      if (!near(tr.v[c][c], want, 1e-12))
        return violation_exit("schedule.firm-identity");
    }
  }
  return 0;
}

AuditDocument audit_bundles(const ExperimentConfig& cfg, const EvalBudget& budget,
                            const std::vector<Vec>& x_list) {
  DeviationGrid grid{cfg.run.grid, max_demand(cfg.population)};
  AuditDocument doc;
  doc.x_list = x_list;
  doc.grid_steps = grid.steps;
  doc.grid_cap = grid.cap;
  doc.method = budget.exact ? "exact-enumeration" : "monte-carlo";
  doc.samples = budget.exact ? 0 : budget.samples;
  bool first = true;
  for (std::size_t xi = 0; xi < x_list.size(); ++xi) {
    auto audit_one = [&](const ConsumerType& t, const std::string& source) {
      AuditRow row;
      row.x_index = int(xi);
      row.source = source;
      row.rep = ic_audit(t, x_list[xi], cfg.market, cfg.supply, grid, budget);
      if (first || row.rep.gap < doc.min_gap) doc.min_gap = row.rep.gap;
      first = false;
      if (row.rep.gap < -row.rep.slack) ++doc.violations;
      doc.rows.push_back(std::move(row));
    };
    for (std::size_t i = 0; i < cfg.population.entries.size(); ++i)
      audit_one(cfg.population.entries[i], "types[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < cfg.population.probes.size(); ++i)
      audit_one(cfg.population.probes[i], "probes[" + std::to_string(i) + "]");
  }
  return doc;
}

int run_audit_ic(const ExperimentConfig& cfg, const Flags& f) {
  EvalBudget budget = make_budget(cfg);
  const int n = cfg.market.periods;
  std::vector<Vec> x_list;
  x_list.push_back(aggregate_truthful(cfg.population, n));
  double hi = max_demand(cfg.population);
  double total = 0.0;
  for (double q : x_list[0]) {
    hi = std::max(hi, q);
    total += q;
  }
  if (hi <= 0.0) hi = 1.0;
  // Adversarial bundles: the whole truthful total piled onto one deadline
  // pushes each menu entry to its extreme.
  for (int k = 0; k < n && total > 0.0; ++k) {
    Vec x(std::size_t(n), 0.0);
    x[std::size_t(k)] = total;
    x_list.push_back(std::move(x));
  }
  for (int r = 0; r < f.random_x; ++r) {
    Rng rng(child_seed(cfg.run.seed ^ 0xA0D17ULL, std::uint64_t(r)));
    Vec x(std::size_t(n), 0.0);
    for (int k = 0; k < n; ++k) x[std::size_t(k)] = rng.uniform(0.0, 2.0 * hi);
    x_list.push_back(std::move(x));
  }
  AuditDocument doc = audit_bundles(cfg, budget, x_list);
  write_output(render_audit(doc, cfg.run.format), f.out);
  if (doc.violations > 0) return violation_exit("audit.gap");
  return 0;
}

int run_equilibrium(const ExperimentConfig& cfg, const Flags& f) {
  EvalBudget budget = make_budget(cfg);
  DeviationGrid grid{cfg.run.grid, max_demand(cfg.population)};
  EquilibriumReport rep =
      equilibrium_check(cfg.population, cfg.market, cfg.supply, grid, budget);
  write_output(render_equilibrium(rep, cfg.run.format), f.out);
  if (!rep.advisory) {
    for (const PayoffReport& p : rep.ic_entries)
      if (p.gap < -p.slack) return violation_exit("equilibrium.ic");
    for (const PayoffReport& p : rep.ic_probes)
      if (p.gap < -p.slack) return violation_exit("equilibrium.ic");
    if (rep.foc_residual > 1e-6 && budget.exact)
      return violation_exit("equilibrium.foc");
  }
  return 0;
}

int run_gradcheck(const ExperimentConfig& cfg, const Flags& f) {
  EvalBudget budget = make_budget(cfg);
  Vec x = aggregate_truthful(cfg.population, cfg.market.periods);
  StepSpec step{cfg.run.step, cfg.run.relative_step};
  GradCheckReport rep = grad_check(x, cfg.market, cfg.supply, step, budget);
  write_output(render_gradcheck(rep, cfg.run.format), f.out);
  if (rep.max_rel_gap > 1e-2) return violation_exit("gradcheck.gap");
  return 0;
}

int run_oracle(const ExperimentConfig& cfg, const Flags& f) {
  Vec x = aggregate_truthful(cfg.population, cfg.market.periods);
  OracleReport rep = edf_optimality_check(x, cfg.market, cfg.supply);
  write_output(render_oracle(rep, x, cfg.run.format), f.out);
  if (!rep.pass) return violation_exit("oracle.edf");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deadline-differentiated energy market toolkit"};
  app.require_subcommand(1);

  Flags f;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", f.config, "experiment config (JSON)")
        ->required();
    cmd->add_option("--samples", f.samples, "Monte Carlo sample budget");
    cmd->add_option("--seed", f.seed, "root seed for all derived streams");
    cmd->add_option("--grid", f.grid, "deviation grid steps per deadline");
    cmd->add_option("--step", f.step, "finite-difference step");
    cmd->add_option("--workers", f.workers, "parallel worker count");
    cmd->add_option("--out", f.out, "artifact path (stdout when omitted)");
    cmd->add_option("--format", f.format, "json|csv|md")
        ->check(CLI::IsMember({"json", "csv", "md"}));
    cmd->add_option("--method", f.method, "auto|exact|monte-carlo")
        ->check(CLI::IsMember({"auto", "exact", "monte-carlo"}));
    return cmd;
  };

  CLI::App* price = add_common(app.add_subcommand(
      "price", "compute the deadline price menu for the truthful aggregate"));
  CLI::App* schedule = add_common(app.add_subcommand(
      "schedule", "dispatch the truthful aggregate and export traces"));
  CLI::App* audit = add_common(app.add_subcommand(
      "audit-ic", "search deviation grids for incentive violations"));
  audit->add_option("--random-x", f.random_x,
                    "additional random bundles to audit");
  CLI::App* equilibrium = add_common(app.add_subcommand(
      "equilibrium", "full truthful-equilibrium verification"));
  CLI::App* gradcheck = add_common(app.add_subcommand(
      "gradcheck", "finite-difference check of menu vs marginal cost"));
  CLI::App* oracle = add_common(app.add_subcommand(
      "oracle-edf", "exhaustive-policy optimality check of the dispatch rule"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 prints help/usage; its error codes collapse onto the documented
    // contract of exactly 1 for any usage problem, 0 for --help.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    ExperimentConfig cfg = load_config(f.config);
    apply_flags(cfg, f);
    if (app.got_subcommand(price)) return run_price(cfg, f);
    if (app.got_subcommand(schedule)) return run_schedule(cfg, f);
    if (app.got_subcommand(audit)) return run_audit_ic(cfg, f);
    if (app.got_subcommand(equilibrium)) return run_equilibrium(cfg, f);
    if (app.got_subcommand(gradcheck)) return run_gradcheck(cfg, f);
    if (app.got_subcommand(oracle)) return run_oracle(cfg, f);
    std::cerr << "error[cli.command]: no command selected\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error[config.invalid]: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
}
