#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ddp/report.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace ddp;

namespace {

PriceMenu golden_menu() {
  SupplyModel model = make_finite_scenario({{0, 0}, {0, 2}, {4, 0}, {4, 2}},
                                           {0.25, 0.25, 0.25, 0.25});
  return price_menu({2, 1}, MarketConfig{2, 1.0}, model,
                    auto_budget(model, 0, 0, 1));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("floats are pinned to 12 significant digits") {
  CHECK(fmt12(0.25) == "0.25");
  CHECK(fmt12(0.0) == "0");
  CHECK(fmt12(1e-9) == "1e-09");
  CHECK(round12(0.1234567890123456) == 0.123456789012);
  // idempotent: a rounded value re-rounds to itself
  double v = round12(0.987654321987654321);
  CHECK(round12(v) == v);
  CHECK(round12(1.0 / 3.0) == 0.333333333333);
}

TEST_CASE("menu artifacts keep a fixed key order") {
  std::string body = render_menu(golden_menu(), "json");
  auto doc = nlohmann::json::parse(body);
  CHECK(doc["p"].size() == 2);
  CHECK(doc["p"][0] == 0.5);
  CHECK(doc["p"][1] == 0.25);
  CHECK(doc["c0"] == 1.0);
  CHECK(doc["method"] == "exact-enumeration");
  CHECK(doc["samples"] == 4);
  CHECK(doc["stderr"] == nlohmann::json::array({0.0, 0.0}));
  CHECK(doc["assumption2"] == false);
  CHECK(doc["x"] == nlohmann::json::array({2.0, 1.0}));
  std::size_t pos_p = body.find("\"p\"");
  std::size_t pos_c0 = body.find("\"c0\"");
  std::size_t pos_method = body.find("\"method\"");
  std::size_t pos_samples = body.find("\"samples\"");
  std::size_t pos_se = body.find("\"stderr\"");
  std::size_t pos_flag = body.find("\"assumption2\"");
  std::size_t pos_x = body.find("\"x\"");
  CHECK(pos_p < pos_c0);
  CHECK(pos_c0 < pos_method);
  CHECK(pos_method < pos_samples);
  CHECK(pos_samples < pos_se);
  CHECK(pos_se < pos_flag);
  CHECK(pos_flag < pos_x);
}

TEST_CASE("menu CSV and Markdown carry one row per deadline") {
  PriceMenu menu = golden_menu();
  std::string csv = render_menu(menu, "csv");
  CHECK(csv == "deadline,p,stderr\n1,0.5,0\n2,0.25,0\n");
  std::string md = render_menu(menu, "md");
  CHECK(md.find("| deadline | price | stderr |") != std::string::npos);
  CHECK(md.find("| 2 | 0.25 | 0 |") != std::string::npos);
}

TEST_CASE("rendering is byte stable across calls") {
  PriceMenu menu = golden_menu();
  CHECK(render_menu(menu, "json") == render_menu(menu, "json"));
  CHECK(render_menu(menu, "csv") == render_menu(menu, "csv"));
  CHECK(render_menu(menu, "md") == render_menu(menu, "md"));
}

TEST_CASE("trace CSV lists firm completions per class") {
  std::vector<ScheduleTrace> traces = {simulate({2, 1}, {0, 0})};
  std::string csv = render_trace(traces, "csv");
  CHECK(csv ==
        "scenario,period,class,u,v,z_before,z_after\n"
        "0,0,1,0,2,2,0\n"
        "0,0,2,0,0,1,1\n"
        "0,1,1,0,0,0,0\n"
        "0,1,2,0,1,1,0\n");

  std::string js = render_trace(traces, "json");
  auto doc = nlohmann::json::parse(js);
  CHECK(doc["scenarios"].size() == 1);
  CHECK(doc["scenarios"][0]["v"][0][0] == 2.0);
  CHECK(doc["scenarios"][0]["v"][1][1] == 1.0);
  CHECK(render_trace(traces, "md").find("| 0 | 1 | 2 |") != std::string::npos);
}

TEST_CASE("gradcheck artifacts render in all three formats") {
  GradCheckReport rep;
  rep.x = {1.0, 0.0};
  rep.c0 = 1.0;
  rep.method = "monte-carlo";
  rep.samples = 100;
  GradCoord a;
  a.deadline = 1;
  a.h = 0.01;
  a.fd = 0.51;
  a.price = 0.5;
  a.abs_gap = 0.01;
  a.rel_gap = 0.02;
  GradCoord b;
  b.deadline = 2;
  b.skipped = true;
  rep.coords = {a, b};
  rep.max_rel_gap = 0.02;

  auto doc = nlohmann::json::parse(render_gradcheck(rep, "json"));
  CHECK(doc["coords"].size() == 2);
  CHECK(doc["coords"][1]["skipped"] == true);
  CHECK(doc["max_rel_gap"] == 0.02);

  std::string csv = render_gradcheck(rep, "csv");
  CHECK(csv.find("deadline,skipped,h,fd,price,abs_gap,rel_gap\n") == 0);
  CHECK(csv.find("1,0,0.01,0.51,0.5,0.01,0.02\n") != std::string::npos);
  CHECK(csv.find("2,1,") != std::string::npos);
  CHECK(render_gradcheck(rep, "md").find("max relative gap") != std::string::npos);
}

TEST_CASE("audit documents expose sources and worst gaps") {
  AuditDocument docu;
  docu.x_list = {{2, 1}};
  docu.grid_steps = 4;
  docu.grid_cap = 4.0;
  docu.method = "exact-enumeration";
  docu.samples = 0;
  AuditRow row;
  row.x_index = 0;
  row.source = "types[0]";
  row.rep.label = "early";
  row.rep.deadline = 1;
  row.rep.truthful = 6.0;
  row.rep.best_deviation = {3, 1};
  row.rep.best_payoff = 5.25;
  row.rep.gap = 0.75;
  row.rep.slack = 1e-9;
  row.rep.grid_actions = 14;
  row.rep.exact = true;
  docu.rows = {row};
  docu.min_gap = 0.75;

  auto parsed = nlohmann::json::parse(render_audit(docu, "json"));
  CHECK(parsed["reports"].size() == 1);
  CHECK(parsed["reports"][0]["x_index"] == 0);
  CHECK(parsed["reports"][0]["source"] == "types[0]");
  CHECK(parsed["reports"][0]["gap"] == 0.75);
  CHECK(parsed["min_gap"] == 0.75);
  CHECK(parsed["violations"] == 0);

  std::string csv = render_audit(docu, "csv");
  CHECK(csv.find("x_index,source,label,deadline,truthful,best_payoff,gap,slack,"
                 "stderr,grid_actions,inconclusive\n") == 0);
  CHECK(csv.find("0,types[0],early,1,6,5.25,0.75,1e-09,0,14,0\n") !=
        std::string::npos);
  CHECK(render_audit(docu, "md").find("worst gap") != std::string::npos);
}

TEST_CASE("oracle and equilibrium render their verdicts") {
  OracleReport rep;
  rep.edf_cost = 1.25;
  rep.dp_cost = 1.25;
  rep.gap = 0.0;
  rep.tolerance = 1e-9;
  rep.pass = true;
  rep.scenarios = 4;
  rep.states = 17;
  auto doc = nlohmann::json::parse(render_oracle(rep, {2, 1}, "json"));
  CHECK(doc["pass"] == true);
  CHECK(doc["edf_cost"] == 1.25);
  std::string md = render_oracle(rep, {2, 1}, "md");
  CHECK(md.find("oracle min") != std::string::npos);
  CHECK(md.find(": pass") != std::string::npos);

  EquilibriumReport eq;
  eq.x_star = {2, 1};
  eq.menu = golden_menu();
  eq.welfare = 4.75;
  eq.utility_total = 6.0;
  eq.cost = 1.25;
  eq.foc_directions = 14;
  auto eqdoc = nlohmann::json::parse(render_equilibrium(eq, "json"));
  CHECK(eqdoc["welfare"] == 4.75);
  CHECK(eqdoc["menu"]["p"][0] == 0.5);
  CHECK(eqdoc["ic"]["entries"].empty());
  CHECK(render_equilibrium(eq, "md").find("x*") != std::string::npos);
}

TEST_CASE("unsupported formats are refused with a code") {
  PriceMenu menu = golden_menu();
  CHECK_THROWS_AS(render_menu(menu, "yaml"), Error);
  EquilibriumReport eq;
  eq.menu = menu;
  CHECK_THROWS_AS(render_equilibrium(eq, "csv"), Error);
  OracleReport rep;
  CHECK_THROWS_AS(render_oracle(rep, {1}, "csv"), Error);
  try {
    render_menu(menu, "yaml");
  } catch (const Error& e) {
    CHECK(e.code() == "report.format");
  }
}

TEST_CASE("write_output hits the filesystem or stdout") {
  std::string body = render_menu(golden_menu(), "json");
  const std::string path = "report_roundtrip.json";
  write_output(body, path);
  CHECK(slurp(path) == body);
  std::remove(path.c_str());
  CHECK_THROWS_AS(write_output(body, "no_such_dir/artifact.json"), Error);
}
