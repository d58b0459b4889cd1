#include <cmath>

#include "ddp/population.hpp"
#include "doctest.h"

using namespace ddp;

TEST_CASE("capped-linear utility values") {
  ConsumerType t = make_capped_linear(1, 1.5, 1.0, 1.0);
  CHECK(utility_value(t, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(utility_value(t, 2.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(utility_value(t, 0.0) == 0.0);
}

TEST_CASE("step utility pays only at the full request") {
  ConsumerType t = make_step(1, 1.5, 1.0, 1.0);
  CHECK(utility_value(t, 0.99) == 0.0);
  CHECK(utility_value(t, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(utility_value(t, 5.0) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("staircase utility is right-continuous") {
  // steps at 0.5 (worth 0.4) and 1.0 (worth full 2.0)
  ConsumerType t = make_staircase(1, 2.0, 1.0, 1.0, {0.5, 1.0}, {0.4, 2.0});
  CHECK(utility_value(t, 0.25) == 0.0);
  CHECK(utility_value(t, 0.5) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(utility_value(t, 0.75) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(utility_value(t, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(validate_type(t, 2).ok());
}

TEST_CASE("piecewise-linear utility interpolates its nodes") {
  ConsumerType t =
      make_piecewise_linear(1, 2.0, 1.0, 1.0, {0.0, 0.5, 1.0}, {0.0, 0.8, 2.0});
  CHECK(utility_value(t, 0.25) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(utility_value(t, 0.75) == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(utility_value(t, 1.5) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(validate_type(t, 2).ok());
}

TEST_CASE("negative quantities are a domain error") {
  ConsumerType t = make_capped_linear(1, 1.0, 1.0, 1.0);
  CHECK_THROWS_AS(utility_value(t, -0.1), Error);
  try {
    utility_value(t, -0.1);
  } catch (const Error& e) {
    CHECK(e.code() == "utility.domain");
  }
}

TEST_CASE("validation accepts the standard families") {
  CHECK(validate_type(make_capped_linear(1, 2.0, 1.0, 0.5), 2).ok());
  CHECK(validate_type(make_step(2, 1.0, 3.0, 0.5), 2).ok());
}

TEST_CASE("validation rejects a cap violation at the midpoint") {
  // table worth 0.9*R*q at q/2 exceeds the R*y envelope there
  ConsumerType t =
      make_piecewise_linear(1, 2.0, 1.0, 1.0, {0.0, 0.5, 1.0}, {0.0, 1.8, 2.0});
  ValidationResult r = validate_type(t, 2);
  CHECK(!r.ok());
  bool mentions_cap = false;
  for (const auto& v : r.violations)
    if (v.find("cap violated") != std::string::npos) mentions_cap = true;
  CHECK(mentions_cap);
}

TEST_CASE("validation rejects malformed tables without crashing") {
  // non-increasing abscissae
  ConsumerType t =
      make_piecewise_linear(1, 2.0, 1.0, 1.0, {0.0, 0.6, 0.4, 1.0}, {0, 0.1, 0.2, 2});
  CHECK(!validate_type(t, 2).ok());
  // value drop
  ConsumerType u = make_staircase(1, 2.0, 1.0, 1.0, {0.3, 0.6, 1.0}, {0.5, 0.2, 2});
  CHECK(!validate_type(u, 2).ok());
  // table not ending at (q, R*q)
  ConsumerType w = make_staircase(1, 2.0, 1.0, 1.0, {0.5}, {0.9});
  CHECK(!validate_type(w, 2).ok());
  // bad scalars
  CHECK(!validate_type(make_capped_linear(0, 2.0, 1.0, 1.0), 2).ok());
  CHECK(!validate_type(make_capped_linear(3, 2.0, 1.0, 1.0), 2).ok());
  CHECK(!validate_type(make_capped_linear(1, -1.0, 1.0, 1.0), 2).ok());
  CHECK(!validate_type(make_capped_linear(1, 2.0, 0.0, 1.0), 2).ok());
}

TEST_CASE("every validated family obeys the value envelope") {
  std::vector<ConsumerType> types = {
      make_capped_linear(1, 2.0, 1.5, 1.0), make_step(1, 1.0, 2.0, 1.0),
      make_staircase(1, 2.0, 1.0, 1.0, {0.5, 1.0}, {0.4, 2.0}),
      make_piecewise_linear(1, 2.0, 1.0, 1.0, {0.0, 0.5, 1.0}, {0.0, 0.8, 2.0})};
  for (const ConsumerType& t : types) {
    REQUIRE(validate_type(t, 1).ok());
    double full = utility_value(t, t.demand);
    for (int i = 0; i <= 200; ++i) {
      double y = 2.0 * t.demand * i / 200.0;
      double v = utility_value(t, y);
      CHECK(v >= 0.0);
      CHECK(v <= full + 1e-12);
      CHECK(v <= std::min(y, t.demand) * t.rate + 1e-12);
    }
  }
}

TEST_CASE("truthful actions place the whole demand at the deadline") {
  CHECK(truthful_action(make_capped_linear(2, 1.5, 1.0, 1.0), 3) == Vec{0, 1, 0});
  CHECK(truthful_action(make_capped_linear(1, 2.0, 0.5, 1.0), 2) == Vec{0.5, 0});
  CHECK(truthful_action(make_capped_linear(4, 1.0, 3.0, 1.0), 4) ==
        Vec{0, 0, 0, 3});
}

TEST_CASE("truthful aggregation follows mass times demand") {
  Population solo;
  solo.entries = {make_capped_linear(1, 1, 2, 1.0)};
  CHECK(aggregate_truthful(solo, 2) == Vec{2, 0});

  Population pair;
  pair.entries = {make_capped_linear(1, 1, 4, 0.5), make_capped_linear(2, 1, 2, 0.5)};
  CHECK(aggregate_truthful(pair, 2) == Vec{2, 1});

  Population with_probe = pair;
  with_probe.probes = {make_capped_linear(2, 1, 1, 0.0)};
  CHECK(aggregate_truthful(with_probe, 2) == aggregate_truthful(pair, 2));
}

TEST_CASE("action aggregation is the mass-weighted sum") {
  Population solo;
  solo.entries = {make_capped_linear(1, 1, 2, 1.0)};
  CHECK(aggregate_actions(solo, {{1, 1}}, 2) == Vec{1, 1});

  Population pair;
  pair.entries = {make_capped_linear(1, 1, 4, 0.5), make_capped_linear(2, 1, 2, 0.5)};
  CHECK(aggregate_actions(pair, {{2, 0}, {0, 2}}, 2) == Vec{1, 1});

  std::vector<Vec> truthful;
  for (const ConsumerType& t : pair.entries)
    truthful.push_back(truthful_action(t, 2));
  CHECK(aggregate_actions(pair, truthful, 2) == aggregate_truthful(pair, 2));

  CHECK_THROWS_AS(aggregate_actions(pair, {{1, 0}}, 2), Error);
  CHECK_THROWS_AS(aggregate_actions(pair, {{1}, {0, 2}}, 2), Error);
}

TEST_CASE("concatenated populations aggregate additively") {
  Population a;
  a.entries = {make_capped_linear(1, 1, 3, 0.4), make_capped_linear(2, 1, 1, 0.6)};
  Population b;
  b.entries = {make_capped_linear(2, 1, 5, 1.0)};
  Population mix;
  for (ConsumerType t : a.entries) {
    t.mass *= 0.5;
    mix.entries.push_back(t);
  }
  for (ConsumerType t : b.entries) {
    t.mass *= 0.5;
    mix.entries.push_back(t);
  }
  Vec xa = aggregate_truthful(a, 2), xb = aggregate_truthful(b, 2);
  Vec got = aggregate_truthful(mix, 2);
  for (int k = 0; k < 2; ++k)
    CHECK(got[k] == doctest::Approx(0.5 * xa[k] + 0.5 * xb[k]).epsilon(1e-12));
}

TEST_CASE("population validation checks masses and probe shape") {
  Population p;
  p.entries = {make_capped_linear(1, 1, 1, 0.5), make_capped_linear(2, 1, 1, 0.4)};
  CHECK(!validate_population(p, 2).ok());  // masses sum to 0.9
  p.entries[1].mass = 0.5;
  CHECK(validate_population(p, 2).ok());
  p.probes = {make_capped_linear(2, 1, 1, 0.0)};
  CHECK(validate_population(p, 2).ok());
  p.probes[0].mass = 0.1;
  CHECK(!validate_population(p, 2).ok());

  Population empty;
  CHECK(validate_population(empty, 2).ok());  // no entries, no mass to sum
}

TEST_CASE("max demand scans entries and probes") {
  Population p;
  p.entries = {make_capped_linear(1, 1, 4, 0.5), make_capped_linear(2, 1, 2, 0.5)};
  CHECK(max_demand(p) == 4.0);
  p.probes = {make_capped_linear(2, 1, 9, 0.0)};
  CHECK(max_demand(p) == 9.0);
}
