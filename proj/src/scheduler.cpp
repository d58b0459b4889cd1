#include "ddp/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ddp {

namespace {
constexpr double kSlack = 1e-12;  // absolute clamp slack for allocations

void require_state(const Vec& z, int period) {
  for (int c = 0; c < int(z.size()); ++c) {
    if (!(std::isfinite(z[c]) && z[c] >= 0.0))
      throw Error("schedule.state", "negative or non-finite demand in class " +
                                        std::to_string(c + 1));
    if (c < period && z[c] != 0.0)
      throw Error("schedule.state",
                  "class " + std::to_string(c + 1) + " is past due at period " +
                      std::to_string(period) + " but still holds demand");
  }
}
}  // namespace

std::pair<Vec, Vec> edf_controls(const Vec& z, double supply, int period) {
  const int n = int(z.size());
  if (period < 0 || period >= n)
    throw Error("schedule.period", "period " + std::to_string(period) +
                                       " outside horizon of " + std::to_string(n));
  if (!(std::isfinite(supply) && supply >= 0.0))
    throw Error("schedule.supply", "supply must be finite and >= 0");
  require_state(z, period);

  Vec u(n, 0.0), v(n, 0.0);
  double rem = supply;
  for (int c = period; c < n; ++c) {
    double take = std::min(z[c], rem);
    if (take < 0.0) take = 0.0;
    u[c] = take;
    rem -= take;
    if (rem < 0.0) rem = 0.0;  // guard against rounding at the boundary
  }
  // Whatever the due class still lacks is bought firm, completing it exactly.
  v[period] = z[period] - u[period];
  if (v[period] < 0.0) v[period] = 0.0;
  return {std::move(u), std::move(v)};
}

ScheduleTrace simulate(const Vec& x, const Vec& path) {
  const int n = int(x.size());
  if (int(path.size()) != n)
    throw Error("schedule.shape", "bundle length " + std::to_string(n) +
                                      " does not match path length " +
                                      std::to_string(path.size()));
  ScheduleTrace tr;
  tr.x = x;
  tr.path = path;
  tr.z.resize(std::size_t(n) + 1);
  tr.u.resize(std::size_t(n));
  tr.v.resize(std::size_t(n));
  tr.z[0] = x;
  for (int k = 0; k < n; ++k) {
    auto [u, v] = edf_controls(tr.z[std::size_t(k)], path[std::size_t(k)], k);
    Vec next(std::size_t(n), 0.0);
    for (int c = 0; c < n; ++c) {
      double left = tr.z[std::size_t(k)][std::size_t(c)] - u[std::size_t(c)] -
                    v[std::size_t(c)];
      if (left < 0.0) {
        if (left < -kSlack)
          throw Error("schedule.overserve",
                      "class " + std::to_string(c + 1) + " overserved at period " +
                          std::to_string(k));
        left = 0.0;
      }
      // Classes at or past their due period leave the state exactly.
      next[std::size_t(c)] = c <= k ? 0.0 : left;
    }
    tr.u[std::size_t(k)] = std::move(u);
    tr.v[std::size_t(k)] = std::move(v);
    tr.z[std::size_t(k) + 1] = std::move(next);
  }
  return tr;
}

Vec residual_trace(const Vec& x, const Vec& path) {
  const int n = int(x.size());
  if (int(path.size()) != n)
    throw Error("schedule.shape", "bundle length " + std::to_string(n) +
                                      " does not match path length " +
                                      std::to_string(path.size()));
  Vec xi(std::size_t(n) + 1, 0.0);
  for (int k = 0; k < n; ++k)
    xi[std::size_t(k) + 1] =
        std::max(0.0, xi[std::size_t(k)]) + path[std::size_t(k)] - x[std::size_t(k)];
  return xi;
}

std::vector<MarginalService> marginal_service(const ScheduleTrace& trace) {
  const int n = int(trace.x.size());
  std::vector<MarginalService> out(std::size_t(n), MarginalService{});
  for (int c = 0; c < n; ++c) {
    MarginalService ms;
    ms.period = c;
    ms.firm = true;
    for (int t = 0; t <= c; ++t) {
      double ahead = 0.0;  // everything EDF serves before a marginal class-(c+1) unit
      for (int i = 0; i <= c; ++i) ahead += trace.z[std::size_t(t)][std::size_t(i)];
      if (trace.path[std::size_t(t)] > ahead) {
        ms.period = t;
        ms.firm = false;
        break;
      }
    }
    out[std::size_t(c)] = ms;
  }
  return out;
}

Allocation intra_allocate(const ScheduleTrace& trace, const Population& pop,
                          const std::vector<Vec>& entry_actions,
                          const std::vector<Vec>& probe_actions) {
  const int n = int(trace.x.size());
  if (entry_actions.size() != pop.entries.size() ||
      probe_actions.size() != pop.probes.size())
    throw Error("allocate.shape", "one action per entry and per probe required");
  auto check_action = [n](const Vec& a, const std::string& who) {
    if (int(a.size()) != n)
      throw Error("allocate.shape", who + " action must have one slot per class");
    for (double q : a)
      if (!(std::isfinite(q) && q >= 0.0))
        throw Error("allocate.action", who + " action must be nonnegative");
  };

  Vec claimed(std::size_t(n), 0.0);
  for (std::size_t e = 0; e < entry_actions.size(); ++e) {
    check_action(entry_actions[e], "entry " + std::to_string(e));
    for (int c = 0; c < n; ++c)
      claimed[std::size_t(c)] += pop.entries[e].mass * entry_actions[e][std::size_t(c)];
  }
  for (std::size_t p = 0; p < probe_actions.size(); ++p)
    check_action(probe_actions[p], "probe " + std::to_string(p));
  for (int c = 0; c < n; ++c)
    if (!near(claimed[std::size_t(c)], trace.x[std::size_t(c)],
              1e-9 * std::max(1.0, trace.x[std::size_t(c)])))
      throw Error("allocate.mismatch",
                  "mass-weighted requests for class " + std::to_string(c + 1) +
                      " sum to " + std::to_string(claimed[std::size_t(c)]) +
                      " but the dispatched bundle holds " +
                      std::to_string(trace.x[std::size_t(c)]));

  Allocation out;
  out.entry_delivery.resize(entry_actions.size());
  out.probe_delivery.resize(probe_actions.size());

  // Entries split each period's class service pro rata to their class share.
  for (std::size_t e = 0; e < entry_actions.size(); ++e) {
    auto& d = out.entry_delivery[e];
    d.assign(std::size_t(n), Vec(std::size_t(n), 0.0));
    for (int c = 0; c < n; ++c) {
      double xc = trace.x[std::size_t(c)];
      if (xc <= 0.0) continue;
      double share = entry_actions[e][std::size_t(c)] / xc;
      for (int k = 0; k <= c; ++k)
        d[std::size_t(k)][std::size_t(c)] =
            share * (trace.u[std::size_t(k)][std::size_t(c)] +
                     trace.v[std::size_t(k)][std::size_t(c)]);
    }
  }

  // Probes carry no mass, so their whole request rides the marginal unit:
  // all of it lands at the first period with strict surplus over the classes
  // ahead of it, or arrives firm at the due period when no surplus exists.
  std::vector<MarginalService> ms = marginal_service(trace);
  for (std::size_t p = 0; p < probe_actions.size(); ++p) {
    auto& d = out.probe_delivery[p];
    d.assign(std::size_t(n), Vec(std::size_t(n), 0.0));
    for (int c = 0; c < n; ++c) {
      double q = probe_actions[p][std::size_t(c)];
      if (q <= 0.0) continue;
      d[std::size_t(ms[std::size_t(c)].period)][std::size_t(c)] = q;
    }
  }
  return out;
}

double delivered_by(const std::vector<Vec>& delivery, int deadline) {
  if (deadline < 1 || deadline > int(delivery.size()))
    throw Error("allocate.deadline", "deadline outside horizon");
  double total = 0.0;
  for (int k = 0; k < deadline; ++k)
    for (double q : delivery[std::size_t(k)]) total += q;
  return total;
}

double consumer_delivery(const Allocation& alloc, bool probe, std::size_t index,
                         int deadline) {
  const auto& table = probe ? alloc.probe_delivery : alloc.entry_delivery;
  if (index >= table.size())
    throw Error("allocate.lookup", std::string(probe ? "probe " : "entry ") +
                                       std::to_string(index) + " not allocated");
  return delivered_by(table[index], deadline);
}

}  // namespace ddp
