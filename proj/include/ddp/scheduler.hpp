#pragma once

#include <vector>

#include "ddp/common.hpp"
#include "ddp/population.hpp"

namespace ddp {

// One dispatch of the earliest-deadline-first policy against a supply path.
//
// Conventions used everywhere:
//   * periods k = 0..N-1; classes are stored 0-based, slot c holds class c+1
//   * class c+1 may be served during periods 0..c and is due at period c
//   * z[k] is the unserved-demand state at the start of period k; feasible
//     states have z[k][c] == 0 for all classes already past due (c < k)
struct ScheduleTrace {
  Vec x;                 // requested bundle, z[0]
  Vec path;              // supply realization s_0..s_{N-1}
  std::vector<Vec> z;    // (N+1) x N states
  std::vector<Vec> u;    // N x N intermittent service, u[k][c]
  std::vector<Vec> v;    // N x N firm top-up, nonzero only at v[k][k]
};

// Greedy fill in deadline order: u[c] = min(z[c], remaining supply), then the
// class due this period is completed from firm energy. Throws Error
// "schedule.state" when z is infeasible for the period (negative demand, or
// unserved demand left on a past-due class).
std::pair<Vec, Vec> edf_controls(const Vec& z, double supply, int period);

// Rolls edf_controls over the whole horizon. x and path must share a length.
ScheduleTrace simulate(const Vec& x, const Vec& path);

// Surplus process xi_0..xi_N driving costs and prices:
//   xi_0 = 0,  xi_{k+1} = max(0, xi_k) + s_k - x_{k+1}.
// xi_k <= 0 means deadline k needed firm energy max(0, -xi_k).
Vec residual_trace(const Vec& x, const Vec& path);

// Where the first sliver of each class is served under this trace.
struct MarginalService {
  int period = 0;   // period the class first receives energy
  bool firm = false; // true when that first energy is the firm top-up at due time
};

// For each class c the earliest period t <= c whose supply strictly exceeds
// the combined demand of classes 1..c+1 (states taken from the trace). A
// marginal extra unit of class-(c+1) demand rides that surplus; if no period
// has surplus the extra unit is served firm at the due period c.
std::vector<MarginalService> marginal_service(const ScheduleTrace& trace);

// Per-consumer energy split of one trace, per unit mass. An entry requesting
// a[c] per unit mass receives the fraction a[c]/x_c of every period's class-c
// service; zero-mass probes receive their (infinitesimal) request in full at
// the marginal service period. delivery[who][k][c] is period-k class-c energy.
struct Allocation {
  std::vector<std::vector<Vec>> entry_delivery;  // [entry][period][class]
  std::vector<std::vector<Vec>> probe_delivery;  // [probe][period][class]
};

// entry_actions/probe_actions hold each consumer's per-unit-mass request
// (length N). Mass-weighted entry requests must reproduce trace.x within 1e-9.
Allocation intra_allocate(const ScheduleTrace& trace, const Population& pop,
                          const std::vector<Vec>& entry_actions,
                          const std::vector<Vec>& probe_actions);

// Energy a consumer has received by its deadline: sum over periods 0..k-1.
double delivered_by(const std::vector<Vec>& delivery, int deadline);

// Lookup flavor of delivered_by: probe=false addresses entries, probe=true
// addresses probes. Throws Error "allocate.lookup" for an unknown index.
double consumer_delivery(const Allocation& alloc, bool probe, std::size_t index,
                         int deadline);

}  // namespace ddp
