#pragma once

#include <string>
#include <vector>

#include "ddp/audit.hpp"
#include "ddp/edf_oracle.hpp"
#include "ddp/pricing.hpp"
#include "ddp/scheduler.hpp"

namespace ddp {

// Every float that reaches an artifact is first rounded to 12 significant
// digits, and JSON keys keep insertion order, so identical results render to
// identical bytes no matter when or with how many workers they were computed.
double round12(double v);
std::string fmt12(double v);

// One audited (bundle, type) pair in an incentive report.
struct AuditRow {
  int x_index = 0;
  std::string source;  // "types[i]" or "probes[i]"
  PayoffReport rep;
};

struct AuditDocument {
  std::vector<Vec> x_list;
  int grid_steps = 0;
  double grid_cap = 0.0;
  std::string method;
  long samples = 0;
  std::vector<AuditRow> rows;
  double min_gap = 0.0;
  int violations = 0;  // rows with gap < -slack
};

// Renderers return the full artifact body. Supported formats per report:
// menu json|csv|md, trace csv|json|md, gradcheck json|csv|md,
// audit json|csv|md, equilibrium json|md, oracle json|md.
// Unsupported combinations throw Error "report.format".
std::string render_menu(const PriceMenu& menu, const std::string& format);
std::string render_trace(const std::vector<ScheduleTrace>& traces,
                         const std::string& format);
std::string render_gradcheck(const GradCheckReport& rep, const std::string& format);
std::string render_audit(const AuditDocument& doc, const std::string& format);
std::string render_equilibrium(const EquilibriumReport& rep,
                               const std::string& format);
std::string render_oracle(const OracleReport& rep, const Vec& x,
                          const std::string& format);

// Writes to the path, or to stdout when the path is empty. Throws Error
// "report.io" when the file cannot be written.
void write_output(const std::string& text, const std::string& path);

}  // namespace ddp
