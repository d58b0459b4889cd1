#include <cmath>

#include "ddp/audit.hpp"
#include "doctest.h"

using namespace ddp;

namespace {

SupplyModel four_scenario() {
  return make_finite_scenario({{0, 0}, {0, 2}, {4, 0}, {4, 2}},
                              {0.25, 0.25, 0.25, 0.25});
}

Population golden_population() {
  Population pop;
  pop.entries = {make_capped_linear(1, 2.0, 4.0, 0.5, "early"),
                 make_capped_linear(2, 2.0, 2.0, 0.5, "late")};
  return pop;
}

}  // namespace

TEST_CASE("truthful payoff is utility minus the menu payment") {
  MarketConfig cfg{2, 1.0};
  SupplyModel model = four_scenario();
  PriceMenu menu = price_menu({2, 1}, cfg, model, auto_budget(model, 0, 0, 1));
  Population pop = golden_population();
  CHECK(truthful_payoff(pop.entries[0], menu) == 6.0);   // 8 - 0.5*4
  CHECK(truthful_payoff(pop.entries[1], menu) == 3.5);   // 4 - 0.25*2
  CHECK_THROWS_AS(truthful_payoff(make_capped_linear(3, 1, 1, 0.0), menu), Error);
}

TEST_CASE("deviation payoffs match hand enumeration") {
  MarketConfig cfg{2, 1.0};
  SupplyModel model = four_scenario();
  EvalBudget budget = auto_budget(model, 0, 0, 1);
  Population pop = golden_population();
  Vec x{2, 1};

  // requesting the truthful bundle as a zero-mass copy reproduces the
  // guaranteed payoff: the full demand always lands by the deadline
  PayoffEstimate same =
      deviation_payoff(pop.entries[1], {0, 2}, x, cfg, model, budget);
  CHECK(same.value == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(same.method == "exact-enumeration");

  // the early type postponing to class 2 only gets energy when period 0
  // has surplus (paths with s_0 = 4), and pays the cheaper price
  PayoffEstimate late =
      deviation_payoff(pop.entries[0], {0, 4}, x, cfg, model, budget);
  CHECK(late.value == doctest::Approx(3.0).epsilon(1e-12));

  // the late type buying earlier delivery pays more for the same energy
  PayoffEstimate early =
      deviation_payoff(pop.entries[1], {2, 0}, x, cfg, model, budget);
  CHECK(early.value == doctest::Approx(3.0).epsilon(1e-12));

  CHECK_THROWS_AS(
      deviation_payoff(pop.entries[0], {-1, 0}, x, cfg, model, budget), Error);
  CHECK_THROWS_AS(
      deviation_payoff(pop.entries[0], {1, 1, 1}, x, cfg, model, budget), Error);
}

TEST_CASE("exact audit finds no profitable deviation on the golden instance") {
  MarketConfig cfg{2, 1.0};
  SupplyModel model = four_scenario();
  EvalBudget budget = auto_budget(model, 0, 0, 1);
  Population pop = golden_population();
  DeviationGrid grid;
  grid.steps = 4;
  grid.cap = 4.0;

  PayoffReport a = ic_audit(pop.entries[0], {2, 1}, cfg, model, grid, budget);
  CHECK(a.exact);
  CHECK(!a.inconclusive);
  CHECK(a.truthful == 6.0);
  CHECK(a.gap >= -1e-9);
  CHECK(a.slack == 1e-9);
  // 5x5 index grid, total <= 4 keeps 15 points, the truthful one drops out
  CHECK(a.grid_actions == 14);

  PayoffReport b = ic_audit(pop.entries[1], {2, 1}, cfg, model, grid, budget);
  CHECK(b.truthful == 3.5);
  CHECK(b.gap >= -1e-9);
  CHECK(b.grid_actions == 24);  // every 5x5 point fits under the cap
  CHECK(b.best_deviation.size() == 2);
}

TEST_CASE("audit grid arguments are validated") {
  MarketConfig cfg{2, 1.0};
  SupplyModel model = four_scenario();
  EvalBudget budget = auto_budget(model, 0, 0, 1);
  ConsumerType t = make_capped_linear(1, 2.0, 1.0, 1.0);
  DeviationGrid bad;
  bad.steps = 0;
  bad.cap = 1.0;
  CHECK_THROWS_AS(ic_audit(t, {1, 0}, cfg, model, bad, budget), Error);
  bad.steps = 4;
  bad.cap = 0.0;
  CHECK_THROWS_AS(ic_audit(t, {1, 0}, cfg, model, bad, budget), Error);
}

TEST_CASE("sampled audits are reproducible and report their noise") {
  MarketConfig cfg{2, 1.0};
  SupplyModel model = four_scenario();
  EvalBudget mc;
  mc.exact = false;
  mc.samples = 2000;
  mc.seed = 123;
  mc.workers = 1;
  DeviationGrid grid;
  grid.steps = 4;
  grid.cap = 4.0;
  ConsumerType late = make_capped_linear(2, 2.0, 2.0, 0.5);

  PayoffReport one = ic_audit(late, {2, 1}, cfg, model, grid, mc);
  CHECK(!one.exact);
  CHECK(one.slack >= 1e-9);
  CHECK(one.slack == std::max(1e-9, 3.0 * one.best_se));

  EvalBudget wide = mc;
  wide.workers = 4;
  PayoffReport four = ic_audit(late, {2, 1}, cfg, model, grid, wide);
  CHECK(one.best_payoff == four.best_payoff);
  CHECK(one.gap == four.gap);
  CHECK(one.best_deviation == four.best_deviation);

  PayoffReport again = ic_audit(late, {2, 1}, cfg, model, grid, mc);
  CHECK(one.best_payoff == again.best_payoff);
}

TEST_CASE("equilibrium check on the golden instance") {
  MarketConfig cfg{2, 1.0};
  SupplyModel model = four_scenario();
  EvalBudget budget = auto_budget(model, 0, 0, 1);
  Population pop = golden_population();
  pop.probes = {make_capped_linear(2, 2.0, 1.0, 0.0, "shadow")};
  DeviationGrid grid;
  grid.steps = 4;

  EquilibriumReport rep = equilibrium_check(pop, cfg, model, grid, budget);
  CHECK(rep.x_star == Vec{2, 1});
  CHECK(std::abs(rep.menu.p[0] - 0.5) <= 1e-12);
  CHECK(std::abs(rep.menu.p[1] - 0.25) <= 1e-12);
  CHECK(rep.utility_total == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(rep.cost == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(rep.welfare == doctest::Approx(4.75).epsilon(1e-12));
  CHECK(rep.rates_cover_firm_price);
  CHECK(!rep.advisory);
  CHECK(rep.min_gap >= -1e-9);
  CHECK(rep.ic_entries.size() == 2);
  CHECK(rep.ic_probes.size() == 1);
  CHECK(rep.foc_residual <= 1e-9);
  CHECK(rep.foc_directions == 14);  // origin, doubled, 2 per coordinate, 8 random
  CHECK(rep.foc_skipped.empty());
}

TEST_CASE("a rate below the firm price flips the audit to advisory") {
  MarketConfig cfg{2, 1.0};
  SupplyModel model = four_scenario();
  Population pop;
  pop.entries = {make_capped_linear(1, 0.5, 4.0, 0.5),  // R < c0
                 make_capped_linear(2, 2.0, 2.0, 0.5)};
  DeviationGrid grid;
  grid.steps = 2;
  EquilibriumReport rep =
      equilibrium_check(pop, cfg, model, grid, auto_budget(model, 0, 0, 1));
  CHECK(!rep.rates_cover_firm_price);
  CHECK(rep.advisory);
}

TEST_CASE("welfare is maximized at the truthful aggregate") {
  MarketConfig cfg{2, 1.0};
  SupplyModel model = four_scenario();
  EvalBudget budget = auto_budget(model, 0, 0, 1);
  Population pop = golden_population();

  CostEstimate at_star = social_welfare(pop, {2, 1}, cfg, model, budget);
  CHECK(at_star.value == doctest::Approx(4.75).epsilon(1e-12));

  CostEstimate scaled = social_welfare_scaled(pop, {1.0, 1.0}, cfg, model, budget);
  CHECK(scaled.value == doctest::Approx(at_star.value).epsilon(1e-12));

  // scan the 16 coordinate perturbations used by the welfare probe
  for (double f0 : {0.5, 0.75, 1.25, 1.5})
    for (double f1 : {0.5, 0.75, 1.25, 1.5}) {
      CostEstimate w =
          social_welfare(pop, {2.0 * f0, 1.0 * f1}, cfg, model, budget);
      CHECK(at_star.value >= w.value - 1e-9);
    }

  CHECK_THROWS_AS(social_welfare(pop, {1, 1, 1}, cfg, model, budget), Error);
  CHECK_THROWS_AS(social_welfare_scaled(pop, {1.0}, cfg, model, budget), Error);
  CHECK_THROWS_AS(social_welfare_scaled(pop, {1.0, -0.5}, cfg, model, budget),
                  Error);
}
