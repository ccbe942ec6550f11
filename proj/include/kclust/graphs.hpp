#pragma once

#include "kclust/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <unordered_set>
#include <utility>
#include <vector>

namespace kclust {

// Simple undirected graph on vertices 1..n. Edge order is the listing order.
struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> colors;  // empty, or one color in 1..k per vertex

  void validate() const {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [u, v] : edges) {
      if (u < 1 || v < 1 || u > n || v > n) throw InvalidInput("edge endpoint out of range");
      if (u == v) throw InvalidInput("self-loops are not allowed");
      if (!seen.insert({std::min(u, v), std::max(u, v)}).second) throw InvalidInput("duplicate edge");
    }
    if (!colors.empty()) {
      if (colors.size() != n) throw InvalidInput("one color per vertex required");
      for (auto c : colors)
        if (c < 1) throw InvalidInput("colors start at 1");
    }
  }
  bool colored() const { return !colors.empty(); }
  std::size_t num_colors() const { return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()); }
  std::size_t color(std::size_t v) const { return colors.at(v - 1); }

  // Adjacency matrix indexed 1..n.
  std::vector<std::vector<char>> adjacency() const {
    std::vector<std::vector<char>> a(n + 1, std::vector<char>(n + 1, 0));
    for (auto [u, v] : edges) a[u][v] = a[v][u] = 1;
    return a;
  }
  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(n + 1, 0);
    for (auto [u, v] : edges) ++d[u], ++d[v];
    return d;
  }
};

// Exhaustive k-clique search; in colorful mode the clique takes one vertex of
// each color 1..k.
inline bool graph_has_clique(const Graph& g, std::size_t k, bool colorful = false, std::size_t cap = 12) {
  g.validate();
  if (g.n > cap) throw CapExceeded("graph too large for the clique oracle");
  if (colorful && !g.colored()) throw InvalidInput("colorful clique needs colors");
  if (k == 0) return true;
  if (k > g.n) return false;
  auto adj = g.adjacency();
  std::vector<std::size_t> pick;
  std::function<bool(std::size_t)> rec = [&](std::size_t from) -> bool {
    if (pick.size() == k) return true;
    for (std::size_t v = from; v <= g.n; ++v) {
      bool ok = std::all_of(pick.begin(), pick.end(), [&](std::size_t u) { return adj[u][v] != 0; });
      if (ok && colorful) {
        std::size_t c = g.color(v);
        ok = c <= k && std::none_of(pick.begin(), pick.end(), [&](std::size_t u) { return g.color(u) == c; });
      }
      if (!ok) continue;
      pick.push_back(v);
      if (rec(v + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  return rec(1);
}

// CNF with exactly three literals over distinct variables per clause.
struct CnfFormula {
  std::size_t num_vars = 0;
  std::vector<std::vector<int>> clauses;  // signed variable indices

  void validate() const {
    for (const auto& c : clauses) {
      if (c.size() != 3) throw InvalidInput("clauses must have exactly three literals");
      std::set<int> vars;
      for (int lit : c) {
        int v = lit < 0 ? -lit : lit;
        if (v < 1 || static_cast<std::size_t>(v) > num_vars) throw InvalidInput("literal out of range");
        vars.insert(v);
      }
      if (vars.size() != 3) throw InvalidInput("clause variables must be distinct");
    }
  }
};

inline bool sat_bruteforce(const CnfFormula& f, std::size_t cap = 24) {
  f.validate();
  if (f.num_vars > cap) throw CapExceeded("too many variables for the SAT oracle");
  for (std::uint64_t mask = 0; mask < (1ull << f.num_vars); ++mask) {
    bool all = std::all_of(f.clauses.begin(), f.clauses.end(), [&](const std::vector<int>& c) {
      return std::any_of(c.begin(), c.end(), [&](int lit) {
        bool val = mask >> ((lit < 0 ? -lit : lit) - 1) & 1u;
        return lit < 0 ? !val : val;
      });
    });
    if (all) return true;
  }
  return false;
}

struct HioctInstance {
  Graph graph;
  std::size_t t = 0;
};

namespace detail {

// Edges of g that survive delta (delta(u) + delta(v) < 2), as adjacency lists.
inline std::vector<std::vector<std::size_t>> surviving(const Graph& g, const std::vector<int>& delta) {
  std::vector<std::vector<std::size_t>> adj(g.n + 1);
  for (auto [u, v] : g.edges)
    if (delta[u] + delta[v] < 2) adj[u].push_back(v), adj[v].push_back(u);
  return adj;
}

// A shortest odd cycle (vertex sequence) of the graph, or empty if bipartite.
inline std::vector<std::size_t> shortest_odd_cycle(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> best;
  std::vector<long> dist(n);
  std::vector<std::size_t> parent(n);
  for (std::size_t root = 0; root < n; ++root) {
    if (adj[root].empty()) continue;
    std::fill(dist.begin(), dist.end(), -1);
    dist[root] = 0;
    std::vector<std::size_t> queue{root};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::size_t u = queue[qi];
      if (!best.empty() && static_cast<std::size_t>(2 * dist[u] + 1) >= best.size()) break;
      for (auto v : adj[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          parent[v] = u;
          queue.push_back(v);
        } else if (dist[v] == dist[u]) {
          // Two equal-depth paths from root: a closed odd walk; it is a cycle
          // when the paths only share the root, which holds for the shortest.
          std::vector<std::size_t> a{u}, b{v};
          while (a.back() != b.back()) {
            a.push_back(parent[a.back()]);
            b.push_back(parent[b.back()]);
          }
          b.pop_back();
          std::reverse(b.begin(), b.end());
          a.insert(a.end(), b.begin(), b.end());
          if (best.empty() || a.size() < best.size()) best = a;
          if (best.size() == 3) return best;
        }
      }
    }
  }
  return best;
}

}  // namespace detail

inline bool hioct_valid(const HioctInstance& h, const std::vector<int>& delta) {
  long total = 0;
  for (std::size_t v = 1; v <= h.graph.n; ++v) total += delta[v];
  return total <= static_cast<long>(h.t) && detail::shortest_odd_cycle(detail::surviving(h.graph, delta)).empty();
}

// All delta in {0,1,2}^V with sum <= t. Tiny graphs only.
inline bool hioct_bruteforce(const HioctInstance& h, std::size_t cap = 14) {
  h.graph.validate();
  if (h.graph.n > cap) throw CapExceeded("graph too large for the exhaustive HIOCT oracle");
  std::vector<int> delta(h.graph.n + 1, 0);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t v, std::size_t left) -> bool {
    if (v > h.graph.n) return detail::shortest_odd_cycle(detail::surviving(h.graph, delta)).empty();
    for (int x = 0; x <= 2 && static_cast<std::size_t>(x) <= left; ++x) {
      delta[v] = x;
      if (rec(v + 1, left - x)) return true;
    }
    delta[v] = 0;
    return false;
  };
  return rec(1, h.t);
}

struct HioctResult {
  bool feasible = false;
  std::vector<int> delta;  // indexed 1..n
  std::uint64_t nodes = 0;
};

// Branch and bound: some edge of any odd cycle of the surviving graph must be
// deleted, i.e. raised to delta(u) = 2, delta(v) = 2, or both >= 1. Every
// solution dominates one of the three raises, so the search is exact.
inline HioctResult hioct_solve(const HioctInstance& h, std::uint64_t node_cap = 5'000'000) {
  h.graph.validate();
  HioctResult res;
  std::vector<int> delta(h.graph.n + 1, 0);
  std::set<std::vector<int>> failed;
  std::function<bool(long)> rec = [&](long budget) -> bool {
    if (++res.nodes > node_cap) throw CapExceeded("HIOCT search exceeded its node cap");
    auto cycle = detail::shortest_odd_cycle(detail::surviving(h.graph, delta));
    if (cycle.empty()) return true;
    if (failed.count(delta)) return false;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      std::size_t u = cycle[i], v = cycle[(i + 1) % cycle.size()];
      const int du = delta[u], dv = delta[v];
      const std::pair<int, int> raises[3] = {{2, dv}, {du, 2}, {std::max(du, 1), std::max(dv, 1)}};
      for (auto [nu, nv] : raises) {
        long cost = (nu - du) + (nv - dv);
        if (cost == 0 || cost > budget) continue;
        delta[u] = nu, delta[v] = nv;
        if (rec(budget - cost)) return true;
        delta[u] = du, delta[v] = dv;
      }
    }
    failed.insert(delta);
    return false;
  };
  res.feasible = rec(static_cast<long>(h.t));
  if (res.feasible) res.delta = delta;
  return res;
}

// Every graph on n vertices, optionally one per isomorphism class (the
// lexicographically smallest edge mask over all relabelings). n <= 7.
inline std::vector<Graph> all_graphs(std::size_t n, bool up_to_isomorphism = true) {
  if (n > 7) throw CapExceeded("graph enumeration is limited to 7 vertices");
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t v = 2; v <= n; ++v)
    for (std::size_t u = 1; u < v; ++u) slots.emplace_back(u, v);
  std::vector<std::vector<std::size_t>> perms;
  if (up_to_isomorphism) {
    std::vector<std::size_t> perm(n + 1);
    for (std::size_t v = 0; v <= n; ++v) perm[v] = v;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin() + 1, perm.end()));
  }
  std::vector<std::vector<std::size_t>> slot_of(n + 1, std::vector<std::size_t>(n + 1, 0));
  for (std::size_t s = 0; s < slots.size(); ++s) {
    auto [u, v] = slots[s];
    slot_of[u][v] = slot_of[v][u] = s;
  }
  std::vector<Graph> out;
  for (std::uint64_t mask = 0; mask < (1ull << slots.size()); ++mask) {
    if (up_to_isomorphism) {
      bool canonical = true;
      for (const auto& perm : perms) {
        std::uint64_t image = 0;
        for (std::size_t s = 0; s < slots.size(); ++s)
          if (mask >> s & 1u) image |= 1ull << slot_of[perm[slots[s].first]][perm[slots[s].second]];
        if (image < mask) {
          canonical = false;
          break;
        }
      }
      if (!canonical) continue;
    }
    Graph g;
    g.n = n;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1u) g.edges.push_back(slots[s]);
    out.push_back(std::move(g));
  }
  return out;
}

// Random properly colored graph: colors uniform in 1..k, each cross-color pair
// is an edge with probability edge_prob.
template <class Rng>
Graph random_colored_graph(Rng& rng, std::size_t n, std::size_t k, double edge_prob) {
  Graph g;
  g.n = n;
  std::uniform_int_distribution<std::size_t> color(1, k);
  std::bernoulli_distribution coin(edge_prob);
  for (std::size_t v = 1; v <= n; ++v) g.colors.push_back(color(rng));
  for (std::size_t v = 2; v <= n; ++v)
    for (std::size_t u = 1; u < v; ++u)
      if (g.color(u) != g.color(v) && coin(rng)) g.edges.emplace_back(u, v);
  return g;
}

template <class Rng>
CnfFormula random_3cnf(Rng& rng, std::size_t num_vars, std::size_t num_clauses) {
  if (num_clauses > 0 && num_vars < 3) throw InvalidInput("3-CNF clauses need three variables");
  CnfFormula f;
  f.num_vars = num_vars;
  std::vector<int> vars(num_vars);
  for (std::size_t v = 0; v < num_vars; ++v) vars[v] = static_cast<int>(v + 1);
  std::bernoulli_distribution negate(0.5);
  for (std::size_t c = 0; c < num_clauses; ++c) {
    std::shuffle(vars.begin(), vars.end(), rng);
    std::vector<int> clause(vars.begin(), vars.begin() + 3);
    std::sort(clause.begin(), clause.end());
    for (int& lit : clause)
      if (negate(rng)) lit = -lit;
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

}  // namespace kclust
