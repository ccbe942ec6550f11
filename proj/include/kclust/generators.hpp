#pragma once

// Hardness reductions as instance generators, plus a verifier that decides
// both sides of a reduction by exhaustive oracles.

#include "kclust/graphs.hpp"
#include "kclust/oracles.hpp"
#include "kclust/selection.hpp"
#include "kclust/solver.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace kclust {

// The construction would need an empty group or a nonpositive cluster count;
// such instances are "no" by definition of the source problem.
class VacuousInstance : public Error {
 public:
  explicit VacuousInstance(const std::string& what) : Error("vacuous instance: " + what) {}
};

namespace detail {

inline std::size_t choose2(std::size_t k) { return k * (k - 1) / 2; }

// Edges inside a color class are allowed; no multicolored clique can use them.
inline void require_coloring(const Graph& g, std::size_t k) {
  g.validate();
  if (!g.colored()) throw InvalidInput("reduction needs a colored graph");
  for (std::size_t v = 1; v <= g.n; ++v)
    if (g.color(v) > k) throw InvalidInput("colors must lie in 1..k");
}

// Vector x_{i,j,e}: coordinate i holds a, coordinate j holds b (1-based), all
// other coordinates the padding value |V| + (k i + j)|E| + e.
inline Point l0_vector(const Graph& g, std::size_t k, std::size_t i, std::size_t j, std::size_t e, std::size_t a,
                       std::size_t b) {
  Int pad = Int(g.n) + Int(k * i + j) * Int(g.edges.size()) + Int(e);
  Point x(k, pad);
  x[i - 1] = Int(a);
  x[j - 1] = Int(b);
  return x;
}

// Each vector repeats its own padding value; no two vectors may share one.
inline void assert_distinct_padding(const std::vector<Point>& pts, std::size_t num_vertices) {
  std::set<Int> seen;
  for (const auto& x : pts) {
    std::set<Int> own;
    for (const auto& v : x)
      if (v > Int(num_vertices)) own.insert(v);
    if (own.size() > 1) throw Error("vector has two padding values");
    for (const auto& v : own)
      if (!seen.insert(v).second) throw Error("padding values collide");
  }
}

// Vertex vectors of the L-infinity constructions: value 2 at the vertex's own
// coordinate; for every non-edge {u < w} (columns after the vertex columns, in
// colex order) +2 at u and -2 at w.
inline std::vector<Point> linf_vertex_vectors(const Graph& g) {
  auto adj = g.adjacency();
  std::vector<std::pair<std::size_t, std::size_t>> non_edges;
  for (std::size_t w = 2; w <= g.n; ++w)
    for (std::size_t u = 1; u < w; ++u)
      if (!adj[u][w]) non_edges.emplace_back(u, w);
  const std::size_t d = g.n + non_edges.size();
  std::vector<Point> pts(g.n, Point(d, Int(0)));
  for (std::size_t v = 1; v <= g.n; ++v) pts[v - 1][v - 1] = 2;
  for (std::size_t c = 0; c < non_edges.size(); ++c) {
    pts[non_edges[c].first - 1][g.n + c] = 2;
    pts[non_edges[c].second - 1][g.n + c] = -2;
  }
  return pts;
}

// Color pairs (i, j), i < j, in lexicographic order.
inline std::vector<std::pair<std::size_t, std::size_t>> color_pairs(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 1; i <= k; ++i)
    for (std::size_t j = i + 1; j <= k; ++j) out.emplace_back(i, j);
  return out;
}

// Edges of g between colors i and j as (color-i endpoint, color-j endpoint, 1-based edge index).
inline std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> cross_edges(const Graph& g, std::size_t i,
                                                                                  std::size_t j) {
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [u, v] = g.edges[e];
    if (g.color(u) == i && g.color(v) == j) out.emplace_back(u, v, e + 1);
    if (g.color(v) == i && g.color(u) == j) out.emplace_back(v, u, e + 1);
  }
  return out;
}

}  // namespace detail

inline ClusteringInstance gen_l0_clustering_from_clique(const Graph& g, std::size_t k) {
  g.validate();
  if (k < 3) throw InvalidInput("k must be at least 3");
  if (g.edges.empty()) throw VacuousInstance("graph has no edges");
  std::vector<Point> pts;
  for (auto [i, j] : detail::color_pairs(k))
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      auto [u, v] = g.edges[e];
      pts.push_back(detail::l0_vector(g, k, i, j, e + 1, std::min(u, v), std::max(u, v)));
    }
  detail::assert_distinct_padding(pts, g.n);
  const std::size_t pairs = detail::choose2(k);
  if (pts.size() + 1 <= pairs) throw VacuousInstance("fewer vectors than a clique needs");
  ClusteringInstance inst;
  inst.k = pts.size() - pairs + 1;
  inst.dataset = Dataset(k, std::move(pts));
  inst.budget = CostValue::integer(Int(pairs * (k - 2)));
  inst.order = DistanceOrder::l0();
  return inst;
}

inline SelectionInstance gen_l0_selection_from_mcc(const Graph& g, std::size_t k) {
  if (k < 3) throw InvalidInput("k must be at least 3");
  detail::require_coloring(g, k);
  SelectionInstance inst;
  inst.dimension = k;
  inst.order = DistanceOrder::l0();
  std::vector<Point> all;
  for (auto [i, j] : detail::color_pairs(k)) {
    WeightedCluster group;
    for (auto [a, b, e] : detail::cross_edges(g, i, j)) group.add(detail::l0_vector(g, k, i, j, e, a, b), 1);
    if (group.points.empty()) throw VacuousInstance("no edge between two color classes");
    all.insert(all.end(), group.points.begin(), group.points.end());
    inst.groups.push_back(std::move(group));
  }
  detail::assert_distinct_padding(all, g.n);
  inst.budget = CostValue::integer(Int(detail::choose2(k) * (k - 2)));
  return inst;
}

inline SelectionInstance gen_l1_selection_from_mcc(const Graph& g, std::size_t k) {
  if (k < 3) throw InvalidInput("k must be at least 3");
  detail::require_coloring(g, k);
  SelectionInstance inst;
  inst.dimension = k;
  inst.order = DistanceOrder::l1();
  const Int boundary[2] = {Int(0), Int(g.n + 1)};
  for (const auto& off : boundary)
    for (auto [i, j] : detail::color_pairs(k)) {
      WeightedCluster group;
      for (auto [a, b, e] : detail::cross_edges(g, i, j)) {
        Point x(k, off);
        x[i - 1] = Int(a);
        x[j - 1] = Int(b);
        group.add(x, 1);
      }
      if (group.points.empty()) throw VacuousInstance("no edge between two color classes");
      inst.groups.push_back(std::move(group));
    }
  inst.budget = CostValue::integer(Int(k) * Int(g.n + 1) * Int(detail::choose2(k - 1)));
  return inst;
}

inline ClusteringInstance gen_linf_clustering_from_clique(const Graph& g, std::size_t k) {
  g.validate();
  if (k < 2) throw InvalidInput("k must be at least 2");
  if (k > g.n) throw VacuousInstance("clique larger than the graph");
  auto pts = detail::linf_vertex_vectors(g);
  ClusteringInstance inst;
  const std::size_t d = pts.empty() ? 0 : pts.front().size();
  inst.dataset = Dataset(d, std::move(pts));
  inst.k = g.n - k + 1;
  inst.budget = CostValue::halves(Int(2 * k));
  inst.order = DistanceOrder::linf();
  return inst;
}

inline SelectionInstance gen_linf_selection_from_mcc(const Graph& g, std::size_t k) {
  if (k < 2) throw InvalidInput("k must be at least 2");
  detail::require_coloring(g, k);
  auto pts = detail::linf_vertex_vectors(g);
  SelectionInstance inst;
  inst.dimension = pts.empty() ? 0 : pts.front().size();
  inst.order = DistanceOrder::linf();
  for (std::size_t c = 1; c <= k; ++c) {
    WeightedCluster group;
    for (std::size_t v = 1; v <= g.n; ++v)
      if (g.color(v) == c) group.add(pts[v - 1], 1);
    if (group.points.empty()) throw VacuousInstance("empty color class");
    inst.groups.push_back(std::move(group));
  }
  inst.budget = CostValue::halves(Int(2 * k));
  return inst;
}

// Lp Cluster Selection for p > 1. The budget is irrational in general, so it is
// kept as an extended-precision real; for p = 2 it is also exact.
struct LpMccInstance {
  std::size_t dimension = 0;
  std::vector<WeightedCluster> groups;
  Rational p;
  Real budget;
  std::optional<CostValue> exact_budget;

  SelectionInstance as_l2() const {
    if (p != 2 || !exact_budget) throw InvalidInput("only the p = 2 instance has an exact selection form");
    SelectionInstance s;
    s.dimension = dimension;
    s.groups = groups;
    s.budget = *exact_budget;
    s.order = DistanceOrder::l2();
    return s;
  }
};

// Optimal cost of a 0/1 cluster under sum |x - c|^p: coordinates separate and
// each has a closed form in the counts of zeros and ones.
inline Real lp_binary_cluster_cost(const WeightedCluster& c, const Rational& p) {
  Real total = 0;
  for (std::size_t j = 0; j < c.dimension(); ++j) {
    Int zeros = 0, ones = 0;
    for (std::size_t v = 0; v < c.points.size(); ++v) {
      if (c.points[v][j] == 0) zeros += c.weights[v];
      else if (c.points[v][j] == 1) ones += c.weights[v];
      else throw InvalidInput("lp cluster cost needs 0/1 vectors");
    }
    total += binary_coordinate_cost(zeros, ones, p).contribution;
  }
  return total;
}

struct LpSelectionResult {
  bool feasible = false;
  std::vector<std::size_t> chosen;
  Real cost = 0;
};

// Exhaustive minimum over tuples; feasible when the minimum is within the
// budget up to a relative tolerance.
inline LpSelectionResult lp_mcc_bruteforce(const LpMccInstance& inst, const Real& tol = Real("1e-30"),
                                           std::uint64_t cap = 1'000'000) {
  long double product = 1;
  for (const auto& g : inst.groups) product *= static_cast<long double>(g.points.size());
  if (product > static_cast<long double>(cap)) throw CapExceeded("selection tuple count exceeds cap");
  LpSelectionResult best;
  bool have = false;
  std::vector<std::size_t> chosen(inst.groups.size(), 0);
  std::function<void(std::size_t, WeightedCluster&)> rec = [&](std::size_t depth, WeightedCluster& partial) {
    if (depth == inst.groups.size()) {
      Real cost = lp_binary_cluster_cost(partial, inst.p);
      if (!have || cost < best.cost) best.cost = cost, best.chosen = chosen, have = true;
      return;
    }
    const auto& g = inst.groups[depth];
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      chosen[depth] = i;
      partial.add(g.points[i], g.weights[i]);
      rec(depth + 1, partial);
      partial.points.pop_back();
      partial.weights.pop_back();
    }
  };
  WeightedCluster partial;
  rec(0, partial);
  best.feasible = best.cost <= inst.budget + tol * std::max(Real(1), inst.budget);
  return best;
}

// D = k (k-1) C(k-1,2) / ((k-1)^q + C(k-1,2)^q)^(p-1), q = 1/(p-1).
inline Real lp_mcc_budget(std::size_t k, const Rational& p) {
  const Real pm1 = to_real(p - 1), q = 1 / pm1;
  const Real a = Real(k - 1), b = Real(detail::choose2(k - 1));
  return Real(k) * a * b / mp::pow(mp::pow(a, q) + mp::pow(b, q), pm1);
}

inline LpMccInstance gen_lp_selection_from_mcc(const Graph& g, std::size_t k, const Rational& p) {
  if (k < 3) throw InvalidInput("k must be at least 3");
  if (p <= 1) throw InvalidInput("p must exceed 1");
  detail::require_coloring(g, k);
  LpMccInstance inst;
  inst.dimension = g.n;
  inst.p = p;
  for (auto [i, j] : detail::color_pairs(k)) {
    WeightedCluster group;
    for (auto [a, b, e] : detail::cross_edges(g, i, j)) {
      (void)e;
      Point x(g.n, Int(0));
      x[a - 1] = x[b - 1] = 1;
      group.add(x, 1);
    }
    if (group.points.empty()) throw VacuousInstance("no edge between two color classes");
    inst.groups.push_back(std::move(group));
  }
  inst.budget = lp_mcc_budget(k, p);
  if (p == 2) {
    // (k-1) + C(k-1,2) = C(k,2), so D = k (k-1) C(k-1,2) / C(k,2) = 2 C(k-1,2).
    inst.exact_budget = CostValue::rational(Rational(Int(k * (k - 1) * detail::choose2(k - 1)), Int(detail::choose2(k))));
  }
  return inst;
}

// Vertex numbering: x_i = 2i-1, x_i' = 2i; y_{i,j} = 2n + (i-1)(2n+1) + j;
// clause j owns 2n + n(2n+1) + 4(j-1) + 1..4.
inline HioctInstance gen_hioct_from_3sat(const CnfFormula& f) {
  f.validate();
  const std::size_t n = f.num_vars;
  HioctInstance h;
  h.t = 2 * n;
  Graph& g = h.graph;
  g.n = 2 * n + n * (2 * n + 1) + 4 * f.clauses.size();
  for (std::size_t i = 1; i <= n; ++i) {
    g.edges.emplace_back(2 * i - 1, 2 * i);
    for (std::size_t j = 1; j <= 2 * n + 1; ++j) {
      std::size_t y = 2 * n + (i - 1) * (2 * n + 1) + j;
      g.edges.emplace_back(2 * i - 1, y);
      g.edges.emplace_back(2 * i, y);
    }
  }
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    std::size_t base = 2 * n + n * (2 * n + 1) + 4 * j;
    std::vector<std::size_t> lit;
    for (int l : f.clauses[j]) lit.push_back(l > 0 ? 2 * static_cast<std::size_t>(l) - 1 : 2 * static_cast<std::size_t>(-l));
    // C1 - l1 - C2 - l2 - C3 - l3 - C4 - C1
    const std::size_t cycle[7] = {base + 1, lit[0], base + 2, lit[1], base + 3, lit[2], base + 4};
    for (std::size_t s = 0; s < 7; ++s) g.edges.emplace_back(cycle[s], cycle[(s + 1) % 7]);
  }
  g.validate();
  return h;
}

struct Linf2Instance {
  ClusteringInstance instance;
  bool trivial = false;  // t >= |V|: yes without construction
};

// k = 2 clustering under L-infinity. One coordinate per edge (listing order):
// +2 at the smaller endpoint, -2 at the larger. The full construction drops
// isolated vertices and adds t + 5 isolated edges; `figure_mode` skips both.
inline Linf2Instance gen_linf2_from_hioct(const HioctInstance& h, bool figure_mode = false) {
  h.graph.validate();
  Linf2Instance out;
  out.instance.k = 2;
  out.instance.order = DistanceOrder::linf();
  if (h.t >= h.graph.n) {
    out.trivial = true;
    out.instance.dataset = Dataset(1, {Point{Int(0)}});
    out.instance.budget = CostValue::halves(0);
    return out;
  }
  Graph g;
  if (figure_mode) {
    g = h.graph;
  } else {
    auto deg = h.graph.degrees();
    std::vector<std::size_t> id(h.graph.n + 1, 0);
    for (std::size_t v = 1; v <= h.graph.n; ++v)
      if (deg[v] > 0) id[v] = ++g.n;
    for (auto [u, v] : h.graph.edges) g.edges.emplace_back(id[u], id[v]);
    for (std::size_t e = 0; e < h.t + 5; ++e) {
      g.edges.emplace_back(g.n + 1, g.n + 2);
      g.n += 2;
    }
  }
  std::vector<Point> pts(g.n, Point(g.edges.size(), Int(0)));
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [u, v] = g.edges[e];
    pts[std::min(u, v) - 1][e] = 2;
    pts[std::max(u, v) - 1][e] = -2;
  }
  const std::size_t d = g.edges.size();
  out.instance.dataset = Dataset(d, std::move(pts));
  out.instance.budget = CostValue::halves(Int(2 * (g.n + h.t)));
  return out;
}

// Diagnostic quantities for a cluster of an L0 reduction instance: beta counts
// coordinates where some vector holds a vertex value (<= |V|), gamma counts
// vertex entries that differ from the L0 centroid.
struct L0Diagnostics {
  std::size_t beta = 0;
  std::size_t gamma = 0;
  Rational ratio;
};

inline L0Diagnostics l0_cluster_diagnostics(const WeightedCluster& c, std::size_t num_vertices) {
  c.validate();
  if (c.points.size() < 2) throw InvalidInput("diagnostics need at least two vectors");
  Centroid centroid = centroid_l0(c).centroid;
  const Int limit(num_vertices);
  L0Diagnostics d;
  for (std::size_t j = 0; j < c.dimension(); ++j) {
    bool any = false;
    for (const auto& x : c.points) {
      if (x[j] > limit) continue;
      any = true;
      if (Rational(x[j]) != centroid.coords[j]) ++d.gamma;
    }
    if (any) ++d.beta;
  }
  d.ratio = Rational(Int(d.beta) + Int(d.gamma) - 2, Int(c.points.size() - 1));
  return d;
}

inline Rational l0_kappa(std::size_t k) { return Rational(Int(k - 2), Int(detail::choose2(k) - 1)); }

enum class Reduction { L0Clique, L0Mcc, L1Mcc, LinfClique, LinfMcc, LpMcc, SatHioctLinf2 };

inline Reduction parse_reduction(const std::string& name) {
  static const std::map<std::string, Reduction> names = {
      {"l0-clique", Reduction::L0Clique},     {"l0-mcc", Reduction::L0Mcc},
      {"l1-mcc", Reduction::L1Mcc},           {"linf-clique", Reduction::LinfClique},
      {"linf-mcc", Reduction::LinfMcc},       {"lp-mcc", Reduction::LpMcc},
      {"3sat-hioct-linf2", Reduction::SatHioctLinf2}, {"linf-2clust", Reduction::SatHioctLinf2}};
  auto it = names.find(name);
  if (it == names.end()) throw InvalidInput("unknown reduction: " + name);
  return it->second;
}

inline std::string reduction_name(Reduction r) {
  switch (r) {
    case Reduction::L0Clique: return "l0-clique";
    case Reduction::L0Mcc: return "l0-mcc";
    case Reduction::L1Mcc: return "l1-mcc";
    case Reduction::LinfClique: return "linf-clique";
    case Reduction::LinfMcc: return "linf-mcc";
    case Reduction::LpMcc: return "lp-mcc";
    case Reduction::SatHioctLinf2: return "3sat-hioct-linf2";
  }
  return "?";
}

struct ReductionReport {
  Reduction reduction = Reduction::L0Clique;
  bool source = false;
  std::optional<bool> intermediate;  // HIOCT answer in the SAT chain
  bool target = false;
  bool agree = false;
  std::string budget;
  std::optional<std::string> min_cost;  // target optimum when it is known
  bool vacuous = false;
  bool trivial = false;
};

struct VerifyConfig {
  std::size_t k = 3;
  Rational p = 2;  // lp-mcc only
  bool figure_mode = false;
  Real tol = kDefaultTol;
  std::uint64_t oracle_cap = 20'000'000;
};

inline ReductionReport verify_reduction(Reduction r, const Graph& g, const VerifyConfig& cfg = {}) {
  if (r == Reduction::SatHioctLinf2) throw InvalidInput("the SAT chain takes a formula");
  ReductionReport rep;
  rep.reduction = r;
  const bool colorful = r != Reduction::L0Clique && r != Reduction::LinfClique;
  rep.source = graph_has_clique(g, cfg.k, colorful);
  SelectionConfig scfg;
  scfg.tol = cfg.tol;
  auto from_selection = [&](const SelectionInstance& s) {
    auto res = select_bruteforce(s, scfg);
    rep.target = res.feasible;
    rep.budget = format_budget(s.budget, s.order);
    rep.min_cost = res.cost.to_string();
  };
  try {
    switch (r) {
      case Reduction::L0Clique: {
        auto inst = gen_l0_clustering_from_clique(g, cfg.k);
        rep.budget = format_budget(inst.budget, inst.order);
        auto res = solve_composite_enumeration(inst, cfg.oracle_cap, cfg.tol);
        rep.target = res.decision;
        if (res.cost) rep.min_cost = res.cost->to_string();
        break;
      }
      case Reduction::LinfClique: {
        auto inst = gen_linf_clustering_from_clique(g, cfg.k);
        rep.budget = format_budget(inst.budget, inst.order);
        BruteforceConfig bcfg;
        bcfg.tol = cfg.tol;
        auto res = solve_bruteforce(inst, bcfg);
        rep.target = res.decision;
        rep.min_cost = res.min_cost.to_string();
        break;
      }
      case Reduction::L0Mcc: from_selection(gen_l0_selection_from_mcc(g, cfg.k)); break;
      case Reduction::L1Mcc: from_selection(gen_l1_selection_from_mcc(g, cfg.k)); break;
      case Reduction::LinfMcc: from_selection(gen_linf_selection_from_mcc(g, cfg.k)); break;
      case Reduction::LpMcc: {
        auto inst = gen_lp_selection_from_mcc(g, cfg.k, cfg.p);
        if (inst.exact_budget) {
          from_selection(inst.as_l2());
        } else {
          auto res = lp_mcc_bruteforce(inst);
          rep.target = res.feasible;
          rep.budget = inst.budget.str(20);
          rep.min_cost = res.cost.str(20);
        }
        break;
      }
      case Reduction::SatHioctLinf2: break;
    }
  } catch (const VacuousInstance&) {
    rep.vacuous = true;
    rep.target = false;
  }
  rep.agree = rep.source == rep.target;
  return rep;
}

// 3-SAT -> HIOCT -> L-infinity 2-clustering; all three answers must agree.
inline ReductionReport verify_reduction(const CnfFormula& f, const VerifyConfig& cfg = {}) {
  ReductionReport rep;
  rep.reduction = Reduction::SatHioctLinf2;
  rep.source = sat_bruteforce(f);
  auto h = gen_hioct_from_3sat(f);
  rep.intermediate = hioct_solve(h).feasible;
  auto lin = gen_linf2_from_hioct(h, cfg.figure_mode);
  rep.trivial = lin.trivial;
  rep.budget = format_budget(lin.instance.budget, lin.instance.order);
  if (lin.trivial) {
    rep.target = true;
  } else {
    auto res = solve_linf_two_clusters(lin.instance, cfg.oracle_cap, cfg.tol);
    rep.target = res.decision;
  }
  rep.agree = rep.source == *rep.intermediate && rep.source == rep.target;
  return rep;
}

}  // namespace kclust
