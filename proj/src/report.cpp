#include "ddp/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "json.hpp"

namespace ddp {

using ordered = nlohmann::ordered_json;

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) { return std::strtod(fmt12(v).c_str(), nullptr); }

namespace {

ordered num_list(const Vec& v) {
  ordered out = ordered::array();
  for (double q : v) out.push_back(round12(q));
  return out;
}

ordered menu_doc(const PriceMenu& m) {
  ordered d;
  d["p"] = num_list(m.p);
  d["c0"] = round12(m.c0);
  d["method"] = m.method;
  d["samples"] = m.samples;
  d["stderr"] = num_list(m.se);
  d["assumption2"] = m.continuous_law;
  d["x"] = num_list(m.x);
  return d;
}

std::string md_row(std::initializer_list<std::string> cells) {
  std::string out = "|";
  for (const auto& c : cells) out += " " + c + " |";
  out += "\n";
  return out;
}

std::string unsupported(const std::string& what, const std::string& format) {
  throw Error("report.format", what + " reports cannot render as " + format);
}

ordered payoff_doc(const PayoffReport& r) {
  ordered d;
  d["label"] = r.label;
  d["deadline"] = r.deadline;
  d["truthful"] = round12(r.truthful);
  d["best_deviation"] = num_list(r.best_deviation);
  d["best_payoff"] = round12(r.best_payoff);
  d["stderr"] = round12(r.best_se);
  d["gap"] = round12(r.gap);
  d["slack"] = round12(r.slack);
  d["grid_actions"] = r.grid_actions;
  d["exact"] = r.exact;
  d["inconclusive"] = r.inconclusive;
  return d;
}

std::string vec_text(const Vec& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt12(v[i]);
  }
  return out + ")";
}

}  // namespace

std::string render_menu(const PriceMenu& m, const std::string& format) {
  if (format == "json") return menu_doc(m).dump(2) + "\n";
  if (format == "csv") {
    std::string out = "deadline,p,stderr\n";
    for (std::size_t k = 0; k < m.p.size(); ++k)
      out += std::to_string(k + 1) + "," + fmt12(round12(m.p[k])) + "," +
             fmt12(round12(m.se[k])) + "\n";
    return out;
  }
  if (format == "md") {
    std::string out = "# Deadline price menu\n\n";
    out += "- method: " + m.method + "\n";
    out += "- samples: " + std::to_string(m.samples) + "\n";
    out += "- c0: " + fmt12(round12(m.c0)) + "\n";
    out += "- x: " + vec_text(m.x) + "\n\n";
    out += md_row({"deadline", "price", "stderr"});
    out += md_row({"---", "---", "---"});
    for (std::size_t k = 0; k < m.p.size(); ++k)
      out += md_row({std::to_string(k + 1), fmt12(round12(m.p[k])),
                     fmt12(round12(m.se[k]))});
    return out;
  }
  return unsupported("menu", format);
}

std::string render_trace(const std::vector<ScheduleTrace>& traces,
                         const std::string& format) {
  if (format == "csv") {
    std::string out = "scenario,period,class,u,v,z_before,z_after\n";
    for (std::size_t s = 0; s < traces.size(); ++s) {
      const ScheduleTrace& tr = traces[s];
      const std::size_t n = tr.x.size();
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < n; ++c)
          out += std::to_string(s) + "," + std::to_string(k) + "," +
                 std::to_string(c + 1) + "," + fmt12(round12(tr.u[k][c])) + "," +
                 fmt12(round12(tr.v[k][c])) + "," + fmt12(round12(tr.z[k][c])) +
                 "," + fmt12(round12(tr.z[k + 1][c])) + "\n";
    }
    return out;
  }
  if (format == "json") {
    ordered d;
    d["scenarios"] = ordered::array();
    for (const ScheduleTrace& tr : traces) {
      ordered s;
      s["path"] = num_list(tr.path);
      s["x"] = num_list(tr.x);
      ordered u = ordered::array(), v = ordered::array(), z = ordered::array();
      for (const Vec& row : tr.u) u.push_back(num_list(row));
      for (const Vec& row : tr.v) v.push_back(num_list(row));
      for (const Vec& row : tr.z) z.push_back(num_list(row));
      s["u"] = std::move(u);
      s["v"] = std::move(v);
      s["z"] = std::move(z);
      d["scenarios"].push_back(std::move(s));
    }
    return d.dump(2) + "\n";
  }
  if (format == "md") {
    std::string out = "# Dispatch trace\n\n";
    out += md_row({"scenario", "period", "class", "u", "v", "z_before", "z_after"});
    out += md_row({"---", "---", "---", "---", "---", "---", "---"});
    for (std::size_t s = 0; s < traces.size(); ++s) {
      const ScheduleTrace& tr = traces[s];
      const std::size_t n = tr.x.size();
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < n; ++c)
          out += md_row({std::to_string(s), std::to_string(k), std::to_string(c + 1),
                         fmt12(round12(tr.u[k][c])), fmt12(round12(tr.v[k][c])),
                         fmt12(round12(tr.z[k][c])), fmt12(round12(tr.z[k + 1][c]))});
    }
    return out;
  }
  return unsupported("trace", format);
}

std::string render_gradcheck(const GradCheckReport& r, const std::string& format) {
  if (format == "json") {
    ordered d;
    d["x"] = num_list(r.x);
    d["c0"] = round12(r.c0);
    d["method"] = r.method;
    d["samples"] = r.samples;
    d["step"] = round12(r.step.value);
    d["relative_step"] = r.step.relative;
    d["coords"] = ordered::array();
    for (const GradCoord& g : r.coords) {
      ordered c;
      c["deadline"] = g.deadline;
      c["skipped"] = g.skipped;
      c["h"] = round12(g.h);
      c["fd"] = round12(g.fd);
      c["price"] = round12(g.price);
      c["abs_gap"] = round12(g.abs_gap);
      c["rel_gap"] = round12(g.rel_gap);
      d["coords"].push_back(std::move(c));
    }
    d["max_rel_gap"] = round12(r.max_rel_gap);
    return d.dump(2) + "\n";
  }
  if (format == "csv") {
    std::string out = "deadline,skipped,h,fd,price,abs_gap,rel_gap\n";
    for (const GradCoord& g : r.coords)
      out += std::to_string(g.deadline) + "," + (g.skipped ? "1" : "0") + "," +
             fmt12(round12(g.h)) + "," + fmt12(round12(g.fd)) + "," +
             fmt12(round12(g.price)) + "," + fmt12(round12(g.abs_gap)) + "," +
             fmt12(round12(g.rel_gap)) + "\n";
    return out;
  }
  if (format == "md") {
    std::string out = "# Marginal-cost gradient check\n\n";
    out += "- x: " + vec_text(r.x) + "\n";
    out += "- method: " + r.method + ", samples: " + std::to_string(r.samples) + "\n";
    out += "- max relative gap: " + fmt12(round12(r.max_rel_gap)) + "\n\n";
    out += md_row({"deadline", "h", "finite difference", "price", "rel gap", "skipped"});
    out += md_row({"---", "---", "---", "---", "---", "---"});
    for (const GradCoord& g : r.coords)
      out += md_row({std::to_string(g.deadline), fmt12(round12(g.h)),
                     fmt12(round12(g.fd)), fmt12(round12(g.price)),
                     fmt12(round12(g.rel_gap)), g.skipped ? "yes" : "no"});
    return out;
  }
  return unsupported("gradcheck", format);
}

std::string render_audit(const AuditDocument& doc, const std::string& format) {
  if (format == "json") {
    ordered d;
    d["x_list"] = ordered::array();
    for (const Vec& x : doc.x_list) d["x_list"].push_back(num_list(x));
    d["grid"] = ordered{{"steps", doc.grid_steps}, {"cap", round12(doc.grid_cap)}};
    d["method"] = doc.method;
    d["samples"] = doc.samples;
    d["reports"] = ordered::array();
    for (const AuditRow& row : doc.rows) {
      ordered r = payoff_doc(row.rep);
      ordered wrapped;
      wrapped["x_index"] = row.x_index;
      wrapped["source"] = row.source;
      wrapped.update(r);
      d["reports"].push_back(std::move(wrapped));
    }
    d["min_gap"] = round12(doc.min_gap);
    d["violations"] = doc.violations;
    return d.dump(2) + "\n";
  }
  if (format == "csv") {
    std::string out =
        "x_index,source,label,deadline,truthful,best_payoff,gap,slack,stderr,"
        "grid_actions,inconclusive\n";
    for (const AuditRow& row : doc.rows)
      out += std::to_string(row.x_index) + "," + row.source + "," + row.rep.label +
             "," + std::to_string(row.rep.deadline) + "," +
             fmt12(round12(row.rep.truthful)) + "," +
             fmt12(round12(row.rep.best_payoff)) + "," +
             fmt12(round12(row.rep.gap)) + "," + fmt12(round12(row.rep.slack)) +
             "," + fmt12(round12(row.rep.best_se)) + "," +
             std::to_string(row.rep.grid_actions) + "," +
             (row.rep.inconclusive ? "1" : "0") + "\n";
    return out;
  }
  if (format == "md") {
    std::string out = "# Incentive audit\n\n";
    out += "- grid: " + std::to_string(doc.grid_steps) + " steps, cap " +
           fmt12(round12(doc.grid_cap)) + "\n";
    out += "- method: " + doc.method + ", samples: " + std::to_string(doc.samples) +
           "\n";
    out += "- bundles audited: " + std::to_string(doc.x_list.size()) + "\n";
    out += "- worst gap: " + fmt12(round12(doc.min_gap)) + "\n";
    out += "- violations: " + std::to_string(doc.violations) + "\n\n";
    out += md_row({"x", "source", "deadline", "truthful", "best deviation",
                   "best payoff", "gap", "slack"});
    out += md_row({"---", "---", "---", "---", "---", "---", "---", "---"});
    for (const AuditRow& row : doc.rows)
      out += md_row({std::to_string(row.x_index), row.source,
                     std::to_string(row.rep.deadline),
                     fmt12(round12(row.rep.truthful)),
                     vec_text(row.rep.best_deviation),
                     fmt12(round12(row.rep.best_payoff)),
                     fmt12(round12(row.rep.gap)), fmt12(round12(row.rep.slack))});
    return out;
  }
  return unsupported("audit", format);
}

std::string render_equilibrium(const EquilibriumReport& r,
                               const std::string& format) {
  if (format == "json") {
    ordered d;
    d["x_star"] = num_list(r.x_star);
    d["menu"] = menu_doc(r.menu);
    d["welfare"] = round12(r.welfare);
    d["welfare_stderr"] = round12(r.welfare_se);
    d["utility_total"] = round12(r.utility_total);
    d["expected_firm_cost"] = round12(r.cost);
    d["rates_cover_firm_price"] = r.rates_cover_firm_price;
    d["advisory"] = r.advisory;
    d["foc_residual"] = round12(r.foc_residual);
    d["foc_directions"] = r.foc_directions;
    d["foc_skipped"] = r.foc_skipped;
    ordered ic;
    ic["entries"] = ordered::array();
    for (const PayoffReport& p : r.ic_entries) ic["entries"].push_back(payoff_doc(p));
    ic["probes"] = ordered::array();
    for (const PayoffReport& p : r.ic_probes) ic["probes"].push_back(payoff_doc(p));
    ic["min_gap"] = round12(r.min_gap);
    d["ic"] = std::move(ic);
    return d.dump(2) + "\n";
  }
  if (format == "md") {
    std::string out = "# Market equilibrium check\n\n";
    out += "- x*: " + vec_text(r.x_star) + "\n";
    out += "- menu: " + vec_text(r.menu.p) + " (method " + r.menu.method + ")\n";
    out += "- welfare: " + fmt12(round12(r.welfare)) + " (utility " +
           fmt12(round12(r.utility_total)) + " - firm cost " +
           fmt12(round12(r.cost)) + ")\n";
    out += "- rates cover firm price: ";
    out += r.rates_cover_firm_price ? "yes" : "no (advisory only)";
    out += "\n";
    out += "- FOC residual: " + fmt12(round12(r.foc_residual)) + " over " +
           std::to_string(r.foc_directions) + " directions\n";
    out += "- worst IC gap: " + fmt12(round12(r.min_gap)) + "\n\n";
    out += md_row({"source", "deadline", "truthful", "gap", "slack", "inconclusive"});
    out += md_row({"---", "---", "---", "---", "---", "---"});
    for (std::size_t i = 0; i < r.ic_entries.size(); ++i) {
      const PayoffReport& p = r.ic_entries[i];
      out += md_row({"types[" + std::to_string(i) + "]", std::to_string(p.deadline),
                     fmt12(round12(p.truthful)), fmt12(round12(p.gap)),
                     fmt12(round12(p.slack)), p.inconclusive ? "yes" : "no"});
    }
    for (std::size_t i = 0; i < r.ic_probes.size(); ++i) {
      const PayoffReport& p = r.ic_probes[i];
      out += md_row({"probes[" + std::to_string(i) + "]", std::to_string(p.deadline),
                     fmt12(round12(p.truthful)), fmt12(round12(p.gap)),
                     fmt12(round12(p.slack)), p.inconclusive ? "yes" : "no"});
    }
    return out;
  }
  return unsupported("equilibrium", format);
}

std::string render_oracle(const OracleReport& r, const Vec& x,
                          const std::string& format) {
  if (format == "json") {
    ordered d;
    d["x"] = num_list(x);
    d["edf_cost"] = round12(r.edf_cost);
    d["dp_cost"] = round12(r.dp_cost);
    d["gap"] = round12(r.gap);
    d["tolerance"] = round12(r.tolerance);
    d["pass"] = r.pass;
    d["scenarios"] = r.scenarios;
    d["states"] = std::uint64_t(r.states);
    return d.dump(2) + "\n";
  }
  if (format == "md") {
    std::string out = "# Dispatch optimality oracle\n\n";
    out += "- x: " + vec_text(x) + "\n";
    out += "- EDF expected firm cost: " + fmt12(round12(r.edf_cost)) + "\n";
    out += "- exhaustive DP minimum: " + fmt12(round12(r.dp_cost)) + "\n";
    out += "- scenarios: " + std::to_string(r.scenarios) +
           ", memoized states: " + std::to_string(r.states) + "\n";
    out += std::string("- EDF cost <= oracle min + ") + fmt12(r.tolerance) + ": " +
           (r.pass ? "pass" : "FAIL") + "\n";
    return out;
  }
  return unsupported("oracle", format);
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("report.io", "cannot open output path: " + path);
  out << text;
  if (!out) throw Error("report.io", "write failed: " + path);
}

}  // namespace ddp
