#include "ddp/edf_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <vector>

#include "ddp/scheduler.hpp"

namespace ddp {

namespace {

constexpr int kMaxLevel = 64;  // per-value cap keeping state keys packable

int as_small_int(double v, const char* what) {
  double r = std::round(v);
  if (!(std::isfinite(v) && std::abs(v - r) <= 1e-9 && r >= 0.0 && r <= kMaxLevel))
    throw Error("oracle.grid", std::string(what) +
                                   " must be an integer in [0, 64], got " +
                                   std::to_string(v));
  return int(r);
}

struct TreeDp {
  int n = 0;
  double c0 = 0.0;
  std::vector<std::vector<int>> paths;  // integer supply values
  std::vector<double> weights;
  // Memo key: period, representative scenario of the history class, packed z.
  std::unordered_map<std::uint64_t, double> memo;

  // Injective for desk-scale instances: base-65 packing of z, then period
  // and history-class representative mixed in by exact multiplication.
  std::uint64_t key(int k, std::size_t rep, const std::vector<int>& z) const {
    std::uint64_t packed = 0;
    for (int c : z) packed = packed * (kMaxLevel + 1) + std::uint64_t(c);
    packed = packed * std::uint64_t(n + 1) + std::uint64_t(k);
    return packed * (paths.size() + 1) + rep;
  }

  // Minimum expected cost-to-go over all history-dependent policies, given
  // that period k starts in demand state z and the supply history so far is
  // the one shared by `scen` (a prefix-equivalence class of scenarios).
  double solve(int k, const std::vector<std::size_t>& scen, std::vector<int> z) {
    if (k == n) return 0.0;
    std::uint64_t id = key(k, scen.front(), z);
    auto hit = memo.find(id);
    if (hit != memo.end()) return hit->second;

    // Scenarios in one history class branch on the period-k supply value.
    std::map<int, std::vector<std::size_t>> branches;
    for (std::size_t i : scen) branches[paths[i][std::size_t(k)]].push_back(i);
    double node_weight = 0.0;
    for (std::size_t i : scen) node_weight += weights[i];

    double expected = 0.0;
    for (auto& [s, child] : branches) {
      double child_weight = 0.0;
      for (std::size_t i : child) child_weight += weights[i];
      double best = best_action(k, child, z, s);
      expected += (child_weight / node_weight) * best;
    }
    memo.emplace(id, expected);
    return expected;
  }

  // Exhaustive minimization over one period's controls after observing s:
  // every split u of at most s across live classes with u <= z, and every
  // firm purchase v with the due class completed and v <= z - u elsewhere.
  double best_action(int k, const std::vector<std::size_t>& scen,
                     const std::vector<int>& z, int s) {
    double best = -1.0;
    std::vector<int> u(std::size_t(n), 0);
    enumerate_u(k, k, s, z, u, [&](const std::vector<int>& uu) {
      std::vector<int> v(std::size_t(n), 0);
      v[std::size_t(k)] = z[std::size_t(k)] - uu[std::size_t(k)];
      enumerate_v(k, k + 1, z, uu, v, [&](const std::vector<int>& vv) {
        double spend = 0.0;
        for (int c = k; c < n; ++c) spend += vv[std::size_t(c)];
        spend *= c0;
        std::vector<int> next(std::size_t(n), 0);
        for (int c = k + 1; c < n; ++c)
          next[std::size_t(c)] =
              z[std::size_t(c)] - uu[std::size_t(c)] - vv[std::size_t(c)];
        double total = spend + solve(k + 1, scen, std::move(next));
        if (best < 0.0 || total < best) best = total;
      });
    });
    return best;
  }

  template <class F>
  void enumerate_u(int k, int c, int rem, const std::vector<int>& z,
                   std::vector<int>& u, const F& done) {
    if (c == n) {
      done(u);
      return;
    }
    int cap = std::min(z[std::size_t(c)], rem);
    for (int take = 0; take <= cap; ++take) {
      u[std::size_t(c)] = take;
      enumerate_u(k, c + 1, rem - take, z, u, done);
    }
    u[std::size_t(c)] = 0;
  }

  template <class F>
  void enumerate_v(int k, int c, const std::vector<int>& z,
                   const std::vector<int>& u, std::vector<int>& v, const F& done) {
    if (c == n) {
      done(v);
      return;
    }
    int cap = z[std::size_t(c)] - u[std::size_t(c)];
    for (int buy = 0; buy <= cap; ++buy) {
      v[std::size_t(c)] = buy;
      enumerate_v(k, c + 1, z, u, v, done);
    }
    v[std::size_t(c)] = 0;
  }
};

}  // namespace

OracleReport edf_optimality_check(const Vec& x, const MarketConfig& cfg,
                                  const SupplyModel& model, double tol) {
  if (int(x.size()) != model.periods)
    throw Error("oracle.shape", "bundle length must match the supply horizon");
  ScenarioList list = enumerate_scenarios(model);

  TreeDp dp;
  dp.n = model.periods;
  dp.c0 = cfg.c0;
  dp.weights = list.weights;
  dp.paths.reserve(list.paths.size());
  for (const Vec& p : list.paths) {
    std::vector<int> row;
    row.reserve(p.size());
    for (double v : p) row.push_back(as_small_int(v, "supply value"));
    dp.paths.push_back(std::move(row));
  }
  std::vector<int> z0;
  z0.reserve(x.size());
  for (double v : x) z0.push_back(as_small_int(v, "demand value"));

  std::vector<std::size_t> all(list.paths.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  OracleReport rep;
  rep.scenarios = long(list.paths.size());
  rep.tolerance = tol;
  rep.dp_cost = dp.solve(0, all, z0);
  rep.states = dp.memo.size();

  // The greedy rule's cost comes through the simulator, a fully independent
  // code path from the DP above.
  double edf = 0.0;
  for (std::size_t i = 0; i < list.paths.size(); ++i) {
    ScheduleTrace tr = simulate(x, list.paths[i]);
    double firm = 0.0;
    for (const Vec& vk : tr.v)
      for (double q : vk) firm += q;
    edf += list.weights[i] * cfg.c0 * firm;
  }
  rep.edf_cost = edf;
  rep.gap = rep.edf_cost - rep.dp_cost;
  rep.pass = rep.edf_cost <= rep.dp_cost + tol;
  return rep;
}

}  // namespace ddp
