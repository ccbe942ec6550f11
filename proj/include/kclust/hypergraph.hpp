#pragma once

#include "kclust/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

namespace kclust {

using VertexSet = std::vector<std::size_t>;  // sorted, 0-based

struct HyperEdge {
  VertexSet vertices;
  Weight multiplicity = 1;
  bool operator==(const HyperEdge&) const = default;
};

struct Hypergraph {
  std::size_t num_vertices = 0;
  std::vector<HyperEdge> edges;

  Weight edge_count() const {
    Weight s = 0;
    for (const auto& e : edges) s += e.multiplicity;
    return s;
  }
  // Vertices lying in at least one edge, ascending.
  VertexSet active_vertices() const {
    std::set<std::size_t> s;
    for (const auto& e : edges) s.insert(e.vertices.begin(), e.vertices.end());
    return {s.begin(), s.end()};
  }
  void validate() const {
    for (const auto& e : edges) {
      if (e.multiplicity == 0) throw InvalidInput("hyperedge multiplicity must be >= 1");
      if (!std::is_sorted(e.vertices.begin(), e.vertices.end()) ||
          std::adjacent_find(e.vertices.begin(), e.vertices.end()) != e.vertices.end())
        throw InvalidInput("hyperedge vertices must be sorted and distinct");
      if (!e.vertices.empty() && e.vertices.back() >= num_vertices) throw InvalidInput("hyperedge vertex out of range");
    }
  }
};

// Where a host edge came from: group index and index within the group.
struct EdgeSource {
  std::size_t group = 0, index = 0;
};

struct DifferenceHypergraph {
  Hypergraph graph;
  std::vector<EdgeSource> sources;  // parallel to graph.edges
};

// One edge per input vector of weight <= floor(D) that differs from the pivot in
// at most floor(D) coordinates; the edge lists those coordinates and carries
// the vector's weight as multiplicity. Equal vectors give empty edges.
inline DifferenceHypergraph build_difference_hypergraph(const Point& pivot, const SelectionInstance& inst,
                                                        const CostValue& budget, const Real& tol = kDefaultTol) {
  if (pivot.size() != inst.dimension) throw InvalidInput("pivot dimension mismatch");
  Int cutoff = floor_budget(budget, tol);
  DifferenceHypergraph out;
  out.graph.num_vertices = inst.dimension;
  for (std::size_t g = 0; g < inst.groups.size(); ++g) {
    const auto& grp = inst.groups[g];
    for (std::size_t i = 0; i < grp.points.size(); ++i) {
      if (Int(grp.weights[i]) > cutoff) continue;
      VertexSet diff;
      for (std::size_t j = 0; j < pivot.size(); ++j)
        if (grp.points[i][j] != pivot[j]) diff.push_back(j);
      if (Int(diff.size()) > cutoff) continue;
      out.graph.edges.push_back({std::move(diff), grp.weights[i]});
      out.sources.push_back({g, i});
    }
  }
  return out;
}

// Every vertex lies in at least a quarter of the edges (with multiplicity).
inline bool quarter_cover_holds(const Hypergraph& h) {
  Weight total = h.edge_count();
  Weight need = (total + 3) / 4;
  std::vector<Weight> cover(h.num_vertices, 0);
  for (const auto& e : h.edges)
    for (auto v : e.vertices) cover[v] += e.multiplicity;
  return std::all_of(cover.begin(), cover.end(), [&](Weight c) { return c >= need; });
}

struct PatternCaps {
  std::size_t max_vertices = 0;      // 0: D
  std::size_t max_edges = 0;         // 0: D
  std::uint64_t max_candidates = 2'000'000;
};

// Edge cap actually used: min(ceil(160 ln max(D,2)), configured cap). The
// configured cap defaults to D: once no input vector is itself an optimal
// centroid, every chosen vector costs at least its weight, so a solution's
// pattern has at most D edges counted with multiplicity.
inline std::size_t pattern_edge_cap(std::size_t D, const PatternCaps& caps = {}) {
  auto log_cap = static_cast<std::size_t>(std::ceil(160.0 * std::log(static_cast<double>(std::max<std::size_t>(D, 2)))));
  return std::min(log_cap, caps.max_edges ? caps.max_edges : D);
}

namespace detail {

inline std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k, std::uint64_t limit) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (r > static_cast<long double>(limit)) return limit + 1;
  }
  return static_cast<std::uint64_t>(r + 0.5L);
}

inline std::vector<std::uint32_t> permute_masks(const std::vector<std::uint32_t>& masks, const std::vector<std::size_t>& perm) {
  std::vector<std::uint32_t> out;
  out.reserve(masks.size());
  for (auto m : masks) {
    std::uint32_t r = 0;
    for (std::size_t v = 0; v < perm.size(); ++v)
      if (m >> v & 1u) r |= 1u << perm[v];
    out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_canonical(const std::vector<std::uint32_t>& masks, std::size_t nv) {
  std::vector<std::size_t> perm(nv);
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end()))
    if (permute_masks(masks, perm) < masks) return false;
  return true;
}

inline Hypergraph masks_to_hypergraph(const std::vector<std::uint32_t>& masks, std::size_t nv) {
  Hypergraph h;
  h.num_vertices = nv;
  for (std::size_t i = 0; i < masks.size();) {
    std::size_t j = i;
    while (j < masks.size() && masks[j] == masks[i]) ++j;
    HyperEdge e;
    for (std::size_t v = 0; v < nv; ++v)
      if (masks[i] >> v & 1u) e.vertices.push_back(v);
    e.multiplicity = static_cast<Weight>(j - i);
    h.edges.push_back(std::move(e));
    i = j;
  }
  return h;
}

}  // namespace detail

// Calls `yield` once per isomorphism class of hypergraphs with 1..max_vertices
// vertices and 1..edge_cap nonempty edges (a multiset) that pass
// quarter_cover_holds. Representatives are the lexicographically least sorted
// edge-mask list over all vertex relabelings. Returns the number yielded.
// Throws CapExceeded when the raw multiset count exceeds caps.max_candidates.
inline std::uint64_t for_each_pattern(std::size_t D, const std::function<void(const Hypergraph&)>& yield,
                                      const PatternCaps& caps = {}) {
  if (D < 1) throw InvalidInput("pattern enumeration needs D >= 1");
  std::size_t max_v = std::min(D, caps.max_vertices ? caps.max_vertices : D);
  std::size_t max_e = pattern_edge_cap(D, caps);
  if (max_v > 20) throw CapExceeded("pattern vertex count too large");

  std::uint64_t raw = 0;
  for (std::size_t v = 1; v <= max_v; ++v) {
    std::uint64_t masks = (1ull << v) - 1;
    for (std::size_t e = 1; e <= max_e; ++e) {
      raw += detail::binomial_u64(masks + e - 1, e, caps.max_candidates);
      if (raw > caps.max_candidates) throw CapExceeded("pattern candidates exceed cap");
    }
  }

  std::uint64_t yielded = 0;
  for (std::size_t v = 1; v <= max_v; ++v) {
    std::uint32_t full = (1u << v) - 1;
    std::vector<std::uint32_t> masks;
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t from) {
      if (!masks.empty()) {
        std::uint32_t covered = 0;
        for (auto m : masks) covered |= m;
        if (covered == full) {
          Hypergraph h = detail::masks_to_hypergraph(masks, v);
          if (quarter_cover_holds(h) && detail::is_canonical(masks, v)) {
            ++yielded;
            yield(h);
          }
        }
      }
      if (masks.size() == max_e) return;
      for (std::uint32_t m = from; m <= full; ++m) {
        masks.push_back(m);
        rec(m);
        masks.pop_back();
      }
    };
    rec(1);
  }
  return yielded;
}

inline std::vector<Hypergraph> enumerate_patterns(std::size_t D, const PatternCaps& caps = {}) {
  std::vector<Hypergraph> out;
  for_each_pattern(D, [&](const Hypergraph& h) { out.push_back(h); }, caps);
  return out;
}

// Is there, for every pattern edge E, a host edge E' with E' ∩ V' = π(E)?
// `pi` maps pattern vertex i to host vertex pi[i].
inline bool appearance_holds(const Hypergraph& pattern, const Hypergraph& host, const std::vector<std::size_t>& pi) {
  std::set<std::size_t> image(pi.begin(), pi.end());
  if (image.size() != pi.size() || pi.size() != pattern.num_vertices) return false;
  for (const auto& pe : pattern.edges) {
    std::set<std::size_t> want;
    for (auto v : pe.vertices) want.insert(pi[v]);
    bool found = false;
    for (const auto& he : host.edges) {
      std::set<std::size_t> got;
      for (auto v : he.vertices)
        if (image.count(v)) got.insert(v);
      if (got == want) { found = true; break; }
    }
    if (!found) return false;
  }
  return true;
}

// Every vertex set V' of the host onto which the pattern maps by some
// bijection π with each pattern edge equal to (host edge ∩ V'). Backtracking
// over images of pattern vertices; partial assignments are pruned when some
// pattern edge already has no consistent host edge. Results sorted, distinct.
inline std::vector<VertexSet> find_appearances(const Hypergraph& pattern, const Hypergraph& host) {
  std::size_t pv = pattern.num_vertices;
  if (pv == 0) return {VertexSet{}};
  VertexSet cand = host.active_vertices();
  if (cand.size() < pv) return {};

  std::vector<std::vector<char>> pin(pattern.edges.size(), std::vector<char>(pv, 0));
  for (std::size_t e = 0; e < pattern.edges.size(); ++e)
    for (auto v : pattern.edges[e].vertices) pin[e][v] = 1;
  std::vector<std::vector<char>> hin(host.edges.size(), std::vector<char>(host.num_vertices, 0));
  for (std::size_t e = 0; e < host.edges.size(); ++e)
    for (auto v : host.edges[e].vertices) hin[e][v] = 1;

  std::vector<std::size_t> pi;
  std::vector<char> used(host.num_vertices, 0);
  std::set<VertexSet> found;

  // Consistency of the first j assigned vertices with some host edge, per pattern edge.
  auto consistent = [&](std::size_t j) {
    for (std::size_t e = 0; e < pattern.edges.size(); ++e) {
      bool ok = false;
      for (std::size_t h = 0; h < host.edges.size() && !ok; ++h) {
        ok = true;
        for (std::size_t i = 0; i < j && ok; ++i) ok = (pin[e][i] != 0) == (hin[h][pi[i]] != 0);
      }
      if (!ok) return false;
    }
    return true;
  };

  std::function<void()> rec = [&]() {
    if (pi.size() == pv) {
      VertexSet img(pi.begin(), pi.end());
      std::sort(img.begin(), img.end());
      found.insert(std::move(img));
      return;
    }
    for (auto v : cand) {
      if (used[v]) continue;
      pi.push_back(v);
      used[v] = 1;
      if (consistent(pi.size())) rec();
      used[v] = 0;
      pi.pop_back();
    }
  };
  rec();
  return {found.begin(), found.end()};
}

enum class CoordinateMode { Auto, Paper, Exhaustive };

struct CoordinateStats {
  std::uint64_t patterns = 0;
  std::uint64_t appearances = 0;
  CoordinateMode used = CoordinateMode::Exhaustive;
};

// Coordinate subsets on which a feasible centroid may differ from the pivot.
// Paper mode: images of all quarter-covered patterns. Exhaustive mode: all
// subsets of size <= D of the host's active vertices. Auto picks exhaustive
// when there are at most 20 active vertices. The empty set is always present.
inline std::set<VertexSet> candidate_coordinate_sets(const Hypergraph& host, std::size_t D,
                                                     CoordinateMode mode = CoordinateMode::Auto,
                                                     const PatternCaps& caps = {}, CoordinateStats* stats = nullptr) {
  VertexSet active = host.active_vertices();
  if (mode == CoordinateMode::Auto) mode = active.size() <= 20 ? CoordinateMode::Exhaustive : CoordinateMode::Paper;
  if (stats) stats->used = mode;
  std::set<VertexSet> out{VertexSet{}};
  if (D == 0 || active.empty()) return out;

  if (mode == CoordinateMode::Exhaustive) {
    std::uint64_t total = 0;
    for (std::size_t s = 1; s <= std::min(D, active.size()); ++s) {
      total += detail::binomial_u64(active.size(), s, caps.max_candidates);
      if (total > caps.max_candidates) throw CapExceeded("coordinate subsets exceed cap");
    }
    VertexSet cur;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      if (!cur.empty()) out.insert(cur);
      if (cur.size() == D) return;
      for (std::size_t i = from; i < active.size(); ++i) {
        cur.push_back(active[i]);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
    return out;
  }

  // Only nonempty host edges can realize a nonempty pattern edge.
  Hypergraph trimmed{host.num_vertices, {}};
  for (const auto& e : host.edges)
    if (!e.vertices.empty()) trimmed.edges.push_back(e);
  for_each_pattern(
      D,
      [&](const Hypergraph& pat) {
        if (stats) ++stats->patterns;
        for (auto& v : find_appearances(pat, trimmed)) {
          if (stats) ++stats->appearances;
          out.insert(std::move(v));
        }
      },
      caps);
  return out;
}

}  // namespace kclust
