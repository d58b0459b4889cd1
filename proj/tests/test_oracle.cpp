#include <cmath>

#include "ddp/edf_oracle.hpp"
#include "ddp/rng.hpp"
#include "doctest.h"

using namespace ddp;

TEST_CASE("four-scenario instance: greedy dispatch attains the DP minimum") {
  SupplyModel model = make_finite_scenario({{0, 0}, {0, 2}, {4, 0}, {4, 2}},
                                           {0.25, 0.25, 0.25, 0.25});
  OracleReport rep = edf_optimality_check({2, 1}, MarketConfig{2, 1.0}, model);
  CHECK(rep.pass);
  CHECK(std::abs(rep.edf_cost - 1.25) <= 1e-12);
  CHECK(std::abs(rep.dp_cost - 1.25) <= 1e-12);
  CHECK(std::abs(rep.gap) <= 1e-12);
  CHECK(rep.scenarios == 4);
  CHECK(rep.states > 0);
}

TEST_CASE("deterministic drought: both sides buy everything firm") {
  SupplyModel model = make_deterministic({0, 0});
  OracleReport rep = edf_optimality_check({1, 1}, MarketConfig{2, 1.5}, model);
  CHECK(rep.pass);
  CHECK(rep.edf_cost == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(rep.dp_cost == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("deterministic abundance: both sides spend nothing") {
  SupplyModel model = make_deterministic({3, 3});
  OracleReport rep = edf_optimality_check({2, 1}, MarketConfig{2, 1.0}, model);
  CHECK(rep.pass);
  CHECK(rep.edf_cost == 0.0);
  CHECK(rep.dp_cost == 0.0);
}

TEST_CASE("waiting for information cannot beat greedy dispatch") {
  // tempting trap: hold back period-0 supply for the later class; the DP
  // explores that and must still land on the greedy cost
  SupplyModel model =
      make_finite_scenario({{2, 0}, {2, 3}}, {0.5, 0.5});
  OracleReport rep = edf_optimality_check({1, 2}, MarketConfig{2, 1.0}, model);
  CHECK(rep.pass);
  // greedy: period 0 serves class 1 then 1 unit of class 2; scenario (2,0)
  // buys the last unit firm, scenario (2,3) rides free supply
  CHECK(rep.edf_cost == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("random integer instances never beat greedy dispatch") {
  Rng rng(515151);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 1 + int(rng.next_u64() % 3);
    int npaths = 2 + int(rng.next_u64() % 3);
    std::vector<Vec> paths(npaths, Vec(n));
    std::vector<double> probs;
    double left = 1.0;
    for (int i = 0; i < npaths - 1; ++i) {
      double w = left * (0.2 + 0.6 * rng.next_double());
      probs.push_back(w);
      left -= w;
    }
    probs.push_back(left);
    for (auto& p : paths)
      for (int k = 0; k < n; ++k) p[k] = double(rng.next_u64() % 4);
    Vec x(n);
    for (int k = 0; k < n; ++k) x[k] = double(rng.next_u64() % 4);

    SupplyModel model = make_finite_scenario(paths, probs);
    OracleReport rep = edf_optimality_check(x, MarketConfig{n, 1.0}, model);
    CHECK(rep.pass);
    CHECK(rep.gap >= -1e-12);  // DP explores a superset of greedy's choices
    CHECK(rep.gap <= rep.tolerance);
  }
}

TEST_CASE("oracle rejects what it cannot verify exactly") {
  SupplyModel ok = make_deterministic({1, 1});
  CHECK_THROWS_AS(edf_optimality_check({0.5, 1}, MarketConfig{2, 1.0}, ok), Error);
  CHECK_THROWS_AS(edf_optimality_check({65, 1}, MarketConfig{2, 1.0}, ok), Error);
  CHECK_THROWS_AS(edf_optimality_check({1, 1, 1}, MarketConfig{3, 1.0}, ok), Error);
  try {
    edf_optimality_check({0.5, 1}, MarketConfig{2, 1.0}, ok);
  } catch (const Error& e) {
    CHECK(e.code() == "oracle.grid");
  }

  SupplyModel continuous = make_iid_uniform({0, 0}, {2, 2});
  CHECK_THROWS_AS(edf_optimality_check({1, 1}, MarketConfig{2, 1.0}, continuous),
                  Error);

  SupplyModel fractional = make_deterministic({0.5, 1});
  CHECK_THROWS_AS(edf_optimality_check({1, 1}, MarketConfig{2, 1.0}, fractional),
                  Error);
}
