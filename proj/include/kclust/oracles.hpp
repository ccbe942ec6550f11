#pragma once

// Exact decision oracles for clustering instances too large for the partition
// brute force, used to check reductions.

#include "kclust/centroids.hpp"
#include "kclust/graphs.hpp"
#include "kclust/instances.hpp"

#include <functional>
#include <optional>
#include <set>
#include <vector>

namespace kclust {

struct OracleResult {
  bool decision = false;
  std::optional<CostValue> cost;  // minimum cost when it is <= D, else unset
  std::optional<Clustering> clustering;
  std::uint64_t nodes = 0;
};

namespace detail {

inline Clustering assemble(const std::vector<InitialCluster>& ic, const std::vector<std::vector<std::size_t>>& blocks,
                           const DistanceOrder& order, const Real& tol) {
  Clustering c;
  c.total_cost = zero_cost(order);
  for (const auto& b : blocks) {
    WeightedCluster wc;
    for (auto i : b) wc.add(ic[i].representative, ic[i].size);
    CentroidResult opt = optimal_centroid(order, wc, LinfMethod::Pairwise, tol);
    c.total_cost += opt.cost;
    c.clusters.push_back(std::move(wc));
    c.centroids.push_back(std::move(opt.centroid));
    c.costs.push_back(std::move(opt.cost));
    c.members.push_back(b);
  }
  return c;
}

}  // namespace detail

// Minimum-cost clustering within budget via its composite clusters. A composite
// cluster of s initial clusters costs at least alpha (s - 1), and cost only
// grows with the cluster, so every composite cluster of cost <= D is found by
// growing sets in index order. A clustering with at most k clusters is a
// disjoint family of such sets merging at least m - k initial clusters.
inline OracleResult solve_composite_enumeration(const ClusteringInstance& inst, std::uint64_t cap = 2'000'000,
                                                const Real& tol = kDefaultTol) {
  inst.validate();
  const auto& order = inst.order;
  auto ic = regularize(inst.dataset);
  const std::size_t m = ic.size();
  OracleResult res;
  const std::size_t need = m > inst.k ? m - inst.k : 0;
  const Real alpha = to_real(alpha_for(order));
  const Real D = cost_eval(inst.budget);

  struct Candidate {
    std::vector<std::size_t> members;
    CostValue cost;
    Real value;
  };
  std::vector<Candidate> cands;
  if (need > 0) {
    std::vector<std::size_t> cur;
    WeightedCluster wc;
    std::function<void(std::size_t)> grow = [&](std::size_t from) {
      for (std::size_t i = from; i < m; ++i) {
        cur.push_back(i);
        wc.add(ic[i].representative, ic[i].size);
        ++res.nodes;
        bool keep = true;
        if (cur.size() >= 2) {
          CentroidResult opt = optimal_centroid(order, wc, LinfMethod::Pairwise, tol);
          keep = cost_le(opt.cost, inst.budget, tol);
          if (keep) {
            if (cands.size() >= cap) throw CapExceeded("too many composite clusters within budget");
            Real v = cost_eval(opt.cost);
            cands.push_back({cur, std::move(opt.cost), v});
          }
        }
        if (keep && alpha * Real(cur.size()) <= D + tol) grow(i + 1);
        wc.points.pop_back();
        wc.weights.pop_back();
        cur.pop_back();
      }
    };
    grow(0);
  }

  std::optional<Real> best_value;
  std::vector<std::size_t> best_pick;
  std::vector<std::size_t> pick;
  std::vector<char> used(m, 0);
  std::function<void(std::size_t, std::size_t, const Real&)> choose = [&](std::size_t from, std::size_t merged,
                                                                           const Real& value) {
    ++res.nodes;
    if (merged >= need) {
      if (!best_value || value < *best_value - tol) {
        best_value = value;
        best_pick = pick;
      }
      return;
    }
    Real lb = value + alpha * Real(need - merged);
    if (lb > D + tol || (best_value && lb >= *best_value - tol)) return;
    for (std::size_t c = from; c < cands.size(); ++c) {
      const auto& cand = cands[c];
      if (std::any_of(cand.members.begin(), cand.members.end(), [&](std::size_t i) { return used[i] != 0; })) continue;
      if (value + cand.value > D + tol) continue;
      for (auto i : cand.members) used[i] = 1;
      pick.push_back(c);
      choose(c + 1, merged + cand.members.size() - 1, value + cand.value);
      pick.pop_back();
      for (auto i : cand.members) used[i] = 0;
    }
  };
  choose(0, 0, Real(0));
  if (!best_value) return res;

  std::vector<std::vector<std::size_t>> blocks;
  std::vector<char> in(m, 0);
  for (auto c : best_pick) {
    blocks.push_back(cands[c].members);
    for (auto i : cands[c].members) in[i] = 1;
  }
  for (std::size_t i = 0; i < m; ++i)
    if (!in[i]) blocks.push_back({i});
  res.clustering = detail::assemble(ic, blocks, order, tol);
  res.cost = res.clustering->total_cost;
  res.decision = cost_le(*res.cost, inst.budget, tol);
  return res;
}

// Exact L-infinity 2-clustering decision. The cost of a cluster is the minimum
// of sum w_v r_v subject to r_u + r_v >= |x_u - x_v|_inf for all pairs in it,
// so a 2-clustering of cost <= D exists iff some half-integral r with
// sum w r <= D makes the conflict graph {uv : r_u + r_v < |x_u - x_v|} bipartite.
// Search: raise r along one pair of a shortest odd conflict cycle, over every
// split of its deficit. Any target r* above r leaves some cycle pair
// unconflicted, and one split is dominated by r*, so the search is exact.
// With h = half the minimum pair distance, at most one vertex per cluster has
// r < h; the "low" vertices are enumerated up front and all others start at h.
inline OracleResult solve_linf_two_clusters(const ClusteringInstance& inst, std::uint64_t node_cap = 20'000'000,
                                            const Real& tol = kDefaultTol) {
  inst.validate();
  if (inst.order.kind() != DistanceOrder::Kind::PInf) throw InvalidInput("L-infinity oracle needs p = inf");
  if (!inst.budget.is_exact()) throw InvalidInput("L-infinity oracle needs an exact budget");
  auto ic = regularize(inst.dataset);
  const std::size_t m = ic.size();
  OracleResult res;
  auto finish = [&](std::vector<std::vector<std::size_t>> blocks) {
    res.clustering = detail::assemble(ic, blocks, inst.order, tol);
    res.cost = res.clustering->total_cost;
    res.decision = cost_le(*res.cost, inst.budget, tol);
    return res;
  };
  if (inst.k >= m) {
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < m; ++i) blocks.push_back({i});
    return finish(blocks);
  }
  if (inst.k == 1) {
    std::vector<std::size_t> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = i;
    auto r = finish({all});
    if (!r.decision) r.cost.reset(), r.clustering.reset();
    return r;
  }
  if (inst.k != 2) throw InvalidInput("L-infinity oracle handles k = 2");

  // Distances and radii in half units.
  std::vector<std::vector<long long>> need2(m, std::vector<long long>(m, 0));
  long long dmin = -1;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      Int g = 0;
      for (std::size_t j = 0; j < inst.dataset.dimension; ++j)
        g = std::max(g, Int(mp::abs(ic[a].representative[j] - ic[b].representative[j])));
      need2[a][b] = need2[b][a] = 2 * g.convert_to<long long>();
      if (dmin < 0 || g < dmin) dmin = g.convert_to<long long>();
    }
  const Int budget2 = floor_of(2 * inst.budget.exact());
  if (budget2 > Int(std::numeric_limits<long long>::max() / 4)) throw CapExceeded("budget too large");
  const long long B = budget2.convert_to<long long>();
  std::vector<long long> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<long long>(ic[i].size);

  // Twins: swapping them is a symmetry, so radii within a class are compared sorted.
  std::vector<std::size_t> cls(m);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t a = 0; a < m; ++a) {
    bool placed = false;
    for (std::size_t c = 0; c < classes.size() && !placed; ++c) {
      std::size_t b = classes[c][0];
      if (w[a] != w[b]) continue;
      bool twin = true;
      for (std::size_t v = 0; v < m && twin; ++v)
        if (v != a && v != b && need2[a][v] != need2[b][v]) twin = false;
      // Members of one class must be pairwise equidistant to stay exchangeable.
      for (auto o : classes[c])
        if (twin && o != b && need2[a][o] != need2[a][b]) twin = false;
      if (twin) {
        classes[c].push_back(a);
        cls[a] = c;
        placed = true;
      }
    }
    if (!placed) {
      cls[a] = classes.size();
      classes.push_back({a});
    }
  }
  std::vector<long long> r(m), cap_r(m);
  // Twins are only exchangeable together with their caps.
  auto key_of = [&]() {
    std::vector<long long> key;
    for (const auto& c : classes) {
      std::vector<std::pair<long long, long long>> vals;
      for (auto i : c) vals.emplace_back(r[i], cap_r[i]);
      std::sort(vals.begin(), vals.end());
      for (auto [a, b] : vals) key.push_back(a), key.push_back(b);
    }
    return key;
  };

  const long long h2 = dmin;  // h in half units
  std::set<std::vector<long long>> failed;

  auto conflict_cycle = [&](const std::vector<char>& gone) {
    std::vector<std::vector<std::size_t>> adj(m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b)
        if (!gone[a] && !gone[b] && r[a] + r[b] < need2[a][b]) adj[a].push_back(b), adj[b].push_back(a);
    return detail::shortest_odd_cycle(adj);
  };
  // Vertex-disjoint odd cycles each need one edge repaired, at no less than
  // its deficit times the lighter endpoint weight.
  auto packing_bound = [&](std::vector<std::size_t> cycle) {
    std::vector<char> gone(m, 0);
    long long lb = 0;
    while (!cycle.empty()) {
      long long cheapest = std::numeric_limits<long long>::max();
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        std::size_t u = cycle[i], v = cycle[(i + 1) % cycle.size()];
        cheapest = std::min(cheapest, (need2[u][v] - r[u] - r[v]) * std::min(w[u], w[v]));
      }
      lb += cheapest;
      for (auto v : cycle) gone[v] = 1;
      cycle = conflict_cycle(gone);
    }
    return lb;
  };

  std::function<bool(long long)> rec = [&](long long left) -> bool {
    if (++res.nodes > node_cap) throw CapExceeded("L-infinity 2-clustering search exceeded its node cap");
    auto cycle = conflict_cycle(std::vector<char>(m, 0));
    if (cycle.empty()) return true;
    auto key = key_of();
    if (failed.count(key)) return false;
    if (packing_bound(cycle) > left) {
      failed.insert(std::move(key));
      return false;
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      std::size_t u = cycle[i], v = cycle[(i + 1) % cycle.size()];
      long long deficit = need2[u][v] - r[u] - r[v];
      for (long long a = 0; a <= deficit; ++a) {
        long long b = deficit - a;
        if (r[u] + a > cap_r[u] || r[v] + b > cap_r[v]) continue;
        long long cost = a * w[u] + b * w[v];
        if (cost > left) continue;
        r[u] += a, r[v] += b;
        if (rec(left - cost)) return true;
        r[u] -= a, r[v] -= b;
      }
    }
    failed.insert(std::move(key));
    return false;
  };

  auto attempt = [&](const std::vector<std::size_t>& low) -> bool {
    long long start = 0;
    for (std::size_t i = 0; i < m; ++i) {
      bool is_low = std::find(low.begin(), low.end(), i) != low.end();
      r[i] = is_low ? 0 : h2;
      cap_r[i] = is_low ? h2 - 1 : std::numeric_limits<long long>::max() / 4;
      // Two lows sit in different clusters; everyone else shares a cluster
      // with one of them and must reach it.
      if (!is_low && low.size() == 2)
        r[i] = std::max(r[i], std::min(need2[low[0]][i], need2[low[1]][i]) - (h2 - 1));
      start += r[i] * w[i];
    }
    if (start > B) return false;
    failed.clear();
    return rec(B - start);
  };

  // Low sets up to twin symmetry: the first member(s) of a class stand for all.
  std::vector<std::vector<std::size_t>> lows{{}};
  if (h2 > 0) {
    for (const auto& c : classes) {
      lows.push_back({c[0]});
      if (c.size() >= 2) lows.push_back({c[0], c[1]});
    }
    for (std::size_t c1 = 0; c1 < classes.size(); ++c1)
      for (std::size_t c2 = c1 + 1; c2 < classes.size(); ++c2) lows.push_back({classes[c1][0], classes[c2][0]});
  }
  for (const auto& low : lows) {
    if (!attempt(low)) continue;
    std::vector<std::vector<std::size_t>> adj(m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b)
        if (r[a] + r[b] < need2[a][b]) adj[a].push_back(b), adj[b].push_back(a);
    std::vector<int> side(m, -1);
    for (std::size_t s = 0; s < m; ++s) {
      if (side[s] >= 0) continue;
      side[s] = 0;
      std::vector<std::size_t> q{s};
      for (std::size_t qi = 0; qi < q.size(); ++qi)
        for (auto v : adj[q[qi]])
          if (side[v] < 0) side[v] = 1 - side[q[qi]], q.push_back(v);
    }
    std::vector<std::vector<std::size_t>> blocks(2);
    for (std::size_t i = 0; i < m; ++i) blocks[side[i]].push_back(i);
    if (blocks[1].empty()) blocks.pop_back();
    auto out = finish(blocks);
    out.cost.reset();  // a witness, not necessarily the minimum
    return out;
  }
  return res;
}

}  // namespace kclust
