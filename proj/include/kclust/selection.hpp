#pragma once

#include "kclust/centroids.hpp"
#include "kclust/hypergraph.hpp"
#include "kclust/instances.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace kclust {

struct SelectionConfig {
  Real tol = kDefaultTol;
  std::uint64_t bruteforce_cap = 1'000'000;  // tuples
  std::uint64_t centroid_cap = 50'000'000;   // candidate centroids fully evaluated
  CoordinateMode coordinate_mode = CoordinateMode::Auto;
  PatternCaps pattern_caps;
  LinfMethod linf = LinfMethod::Pairwise;
};

struct SelectionStats {
  std::uint64_t fixed_centroid_calls = 0;
  std::uint64_t search_nodes = 0;
  std::uint64_t phase1_yes = 0;
  std::uint64_t phase2_pivots = 0;
  std::uint64_t coordinate_sets = 0;
  std::uint64_t patterns = 0;
  std::uint64_t tuples = 0;

  SelectionStats& operator+=(const SelectionStats& o) {
    fixed_centroid_calls += o.fixed_centroid_calls;
    search_nodes += o.search_nodes;
    phase1_yes += o.phase1_yes;
    phase2_pivots += o.phase2_pivots;
    coordinate_sets += o.coordinate_sets;
    patterns += o.patterns;
    tuples += o.tuples;
    return *this;
  }
};

namespace detail {

inline SelectionResult fixed_centroid_scaled(const SelectionInstance& inst, const ScaledCentroid& s, const Real& tol) {
  SelectionResult r;
  r.cost = zero_cost(inst.order);
  r.chosen.reserve(inst.groups.size());
  for (const auto& g : inst.groups) {
    std::size_t best = 0;
    CostValue best_cost;
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      CostValue c = dist_scaled(inst.order, g.points[i], s).scaled(g.weights[i]);
      if (i == 0 || cost_lt(c, best_cost, tol)) {
        best = i;
        best_cost = c;
      }
    }
    r.chosen.push_back(best);
    r.cost += best_cost;
  }
  r.centroid = s.to_centroid();
  r.feasible = cost_le(r.cost, inst.budget, tol);
  return r;
}

// Re-solves the chosen tuple with its optimal centroid.
inline SelectionResult finalize(const SelectionInstance& inst, const std::vector<std::size_t>& chosen,
                                const SelectionConfig& cfg) {
  CentroidResult opt = optimal_centroid(inst.order, chosen_cluster(inst, chosen), cfg.linf, cfg.tol);
  SelectionResult r;
  r.chosen = chosen;
  r.centroid = std::move(opt.centroid);
  r.cost = std::move(opt.cost);
  r.feasible = cost_le(r.cost, inst.budget, cfg.tol);
  return r;
}

inline SelectionResult infeasible() { return SelectionResult{}; }

inline std::pair<Point, Point> bounding_box(const SelectionInstance& inst) {
  Point lo, hi;
  for (const auto& g : inst.groups)
    for (const auto& x : g.points) {
      if (lo.empty()) {
        lo = hi = x;
        continue;
      }
      for (std::size_t i = 0; i < x.size(); ++i) {
        lo[i] = std::min(lo[i], x[i]);
        hi[i] = std::max(hi[i], x[i]);
      }
    }
  return {lo, hi};
}

// Depth-first search over centroids c[i] = values[i][*] / den, coordinate by
// coordinate. A partial centroid is pruned when a floating-point lower bound
// on the selection cost (sum over groups of the cheapest partial distance), or
// the anchor's partial cost, exceeds D by more than a small slack; leaves are
// decided exactly by the fixed-centroid selection. Returns the first feasible
// leaf in enumeration order.
class CentroidSearch {
 public:
  CentroidSearch(const SelectionInstance& inst, const SelectionConfig& cfg, SelectionStats* stats,
                 std::uint64_t* leaves)
      : inst_(inst), cfg_(cfg), stats_(stats), leaves_(leaves) {
    const auto& o = inst.order;
    kind_ = o.kind();
    fractional_ = o.is_fractional();
    if (fractional_) p_ = static_cast<long double>(to_real(o.p()).convert_to<double>());
    budget_ = static_cast<long double>(cost_eval(inst.budget).convert_to<double>());
    slack_ = 1e-9L * std::max<long double>(1, budget_);
  }

  std::optional<SelectionResult> run(const Int& den, const std::vector<std::vector<Int>>& values, const Point* anchor,
                                     Weight anchor_weight) {
    den_ = den;
    dden_ = static_cast<long double>(den.convert_to<double>());
    values_ = &values;
    anchor_ = anchor;
    anchor_w_ = static_cast<long double>(anchor_weight);
    cur_.assign(values.size(), Int(0));
    std::vector<std::vector<long double>> partial;
    for (const auto& g : inst_.groups) partial.emplace_back(g.points.size(), 0.0L);
    result_.reset();
    dfs(0, partial, 0.0L);
    return result_;
  }

 private:
  long double contribution(const Int& x, const Int& v) const {
    Int diff = mp::abs(x * den_ - v);
    if (kind_ == DistanceOrder::Kind::P0) return diff == 0 ? 0.0L : 1.0L;
    long double delta = static_cast<long double>(diff.convert_to<double>()) / dden_;
    switch (kind_) {
      case DistanceOrder::Kind::P2: return delta * delta;
      case DistanceOrder::Kind::PInf: return delta;
      default: return fractional_ ? std::pow(delta, p_) : delta;
    }
  }
  long double combine(long double acc, long double c) const {
    return kind_ == DistanceOrder::Kind::PInf ? std::max(acc, c) : acc + c;
  }

  bool dfs(std::size_t depth, const std::vector<std::vector<long double>>& partial, long double anchor_partial) {
    if (stats_) ++stats_->search_nodes;
    long double lb = 0;
    for (std::size_t g = 0; g < inst_.groups.size(); ++g) {
      long double m = -1;
      for (std::size_t j = 0; j < partial[g].size(); ++j) {
        long double v = partial[g][j] * static_cast<long double>(inst_.groups[g].weights[j]);
        if (m < 0 || v < m) m = v;
      }
      lb += m;
    }
    if (lb > budget_ + slack_) return false;
    if (anchor_ && anchor_partial * anchor_w_ > budget_ + slack_) return false;
    if (depth == values_->size()) {
      if (++*leaves_ > cfg_.centroid_cap) throw CapExceeded("candidate centroid count exceeds cap");
      if (stats_) ++stats_->fixed_centroid_calls;
      ScaledCentroid s;
      s.num = cur_;
      s.den = den_;
      SelectionResult r = fixed_centroid_scaled(inst_, s, cfg_.tol);
      if (r.feasible) {
        result_ = std::move(r);
        return true;
      }
      return false;
    }
    std::vector<std::vector<long double>> next(partial);
    for (const Int& v : (*values_)[depth]) {
      cur_[depth] = v;
      for (std::size_t g = 0; g < inst_.groups.size(); ++g)
        for (std::size_t j = 0; j < partial[g].size(); ++j)
          next[g][j] = combine(partial[g][j], contribution(inst_.groups[g].points[j][depth], v));
      long double na = anchor_ ? combine(anchor_partial, contribution((*anchor_)[depth], v)) : 0.0L;
      if (dfs(depth + 1, next, na)) return true;
    }
    return false;
  }

  const SelectionInstance& inst_;
  const SelectionConfig& cfg_;
  SelectionStats* stats_;
  std::uint64_t* leaves_;
  DistanceOrder::Kind kind_;
  bool fractional_ = false;
  long double p_ = 1, budget_ = 0, slack_ = 0, dden_ = 1, anchor_w_ = 1;
  Int den_ = 1;
  const std::vector<std::vector<Int>>* values_ = nullptr;
  const Point* anchor_ = nullptr;
  std::vector<Int> cur_;
  std::optional<SelectionResult> result_;
};

inline void require_order(const SelectionInstance& inst, DistanceOrder::Kind k, const char* who) {
  if (inst.order.kind() != k) throw InvalidInput(std::string(who) + ": wrong distance order " + inst.order.to_string());
}

}  // namespace detail

// Cheapest vector per group w.r.t. the fixed centroid c (lowest index on ties);
// the cost is measured at c.
inline SelectionResult select_fixed_centroid(const SelectionInstance& inst, const Centroid& c,
                                             const Real& tol = kDefaultTol) {
  if (c.coords.size() != inst.dimension) throw InvalidInput("centroid dimension mismatch");
  return detail::fixed_centroid_scaled(inst, ScaledCentroid::from(c), tol);
}

using ClusterObserver = std::function<void(const WeightedCluster&, const CostValue&)>;

// Exhaustive oracle: the minimum over all tuples of the tuple's optimal cost.
// Partial tuples are pruned when their optimal cost already exceeds the best
// complete tuple (cost can only grow as vectors are added). The first optimum
// in lexicographic tuple order is returned; `feasible` compares it with D.
// `on_cluster` sees every complete tuple that is evaluated.
inline SelectionResult select_bruteforce(const SelectionInstance& inst, const SelectionConfig& cfg = {},
                                         SelectionStats* stats = nullptr, const ClusterObserver& on_cluster = {}) {
  inst.validate();
  long double product = 1;
  for (const auto& g : inst.groups) product *= static_cast<long double>(g.points.size());
  if (product > static_cast<long double>(cfg.bruteforce_cap)) throw CapExceeded("selection tuple count exceeds cap");

  std::vector<std::size_t> chosen;
  WeightedCluster partial;
  std::optional<SelectionResult> best;
  std::function<void()> rec = [&]() {
    std::size_t depth = chosen.size();
    if (depth > 0) {
      CentroidResult opt = optimal_centroid(inst.order, partial, cfg.linf, cfg.tol);
      if (depth == inst.groups.size()) {
        if (stats) ++stats->tuples;
        if (on_cluster) on_cluster(partial, opt.cost);
        if (!best || cost_lt(opt.cost, best->cost, cfg.tol)) {
          best = SelectionResult{false, chosen, opt.centroid, opt.cost};
        }
        return;
      }
      if (best && cost_lt(best->cost, opt.cost, cfg.tol)) return;
    }
    const auto& g = inst.groups[depth];
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      chosen.push_back(i);
      partial.add(g.points[i], g.weights[i]);
      rec();
      partial.points.pop_back();
      partial.weights.pop_back();
      chosen.pop_back();
    }
  };
  rec();
  best->feasible = cost_le(best->cost, inst.budget, cfg.tol);
  return *best;
}

// p in (0, 1]. Phase 1 tries every input vector as the centroid. Phase 2 fixes
// a pivot x1 from the first group, takes the coordinate sets P on which a
// feasible centroid may differ from x1, and tries integral centroids equal to
// x1 off P and within floor(D^(1/p)) of x1 on P (inside the bounding box).
inline SelectionResult select_lp01(const SelectionInstance& inst, const SelectionConfig& cfg = {},
                                   SelectionStats* stats = nullptr) {
  inst.validate();
  detail::require_order(inst, DistanceOrder::Kind::P01, "select_lp01");
  for (const auto& g : inst.groups)
    for (const auto& x : g.points) {
      if (stats) ++stats->fixed_centroid_calls;
      SelectionResult r = select_fixed_centroid(inst, centroid_of(x), cfg.tol);
      if (r.feasible) {
        if (stats) ++stats->phase1_yes;
        return detail::finalize(inst, r.chosen, cfg);
      }
    }

  // Phase 1 failed, so the centroid of any solution is not an input vector and
  // every chosen vector costs at least its weight.
  Int dfloor = floor_budget(inst.budget, cfg.tol);
  if (dfloor < 1) return detail::infeasible();
  const Rational p = inst.order.p();
  Int radius;
  if (inst.budget.is_exact()) {
    radius = floor_root(inst.budget.exact(), p);
  } else {
    Real v = mp::pow(cost_eval(inst.budget) + cfg.tol, to_real(1 / p));
    radius = mp::floor(v).convert_to<Int>();
  }
  auto [lo, hi] = detail::bounding_box(inst);
  std::size_t dcap = dfloor > Int(inst.dimension) ? inst.dimension : dfloor.convert_to<std::size_t>();

  std::uint64_t leaves = 0;
  detail::CentroidSearch search(inst, cfg, stats, &leaves);
  const auto& first = inst.groups[0];
  for (std::size_t xi = 0; xi < first.points.size(); ++xi) {
    if (Int(first.weights[xi]) > dfloor) continue;
    const Point& x1 = first.points[xi];
    if (stats) ++stats->phase2_pivots;
    DifferenceHypergraph host = build_difference_hypergraph(x1, inst, inst.budget, cfg.tol);
    CoordinateStats cs;
    auto sets = candidate_coordinate_sets(host.graph, dcap, cfg.coordinate_mode, cfg.pattern_caps, &cs);
    if (stats) stats->patterns += cs.patterns;
    for (const auto& P : sets) {
      if (P.empty()) continue;  // c = x1: covered by Phase 1
      if (stats) ++stats->coordinate_sets;
      std::vector<std::vector<Int>> values(inst.dimension);
      for (std::size_t i = 0; i < inst.dimension; ++i) values[i] = {x1[i]};
      bool empty = false;
      for (auto i : P) {
        values[i].clear();
        Int from = std::max(lo[i], Int(x1[i] - radius)), to = std::min(hi[i], Int(x1[i] + radius));
        for (Int v = from; v <= to; ++v)
          if (v != x1[i]) values[i].push_back(v);
        if (values[i].empty()) empty = true;
      }
      if (empty) continue;
      if (auto r = search.run(Int(1), values, &x1, first.weights[xi])) return detail::finalize(inst, r->chosen, cfg);
    }
  }
  return detail::infeasible();
}

// p = 2. With no vector shared between groups, t > 4D + 1 is rejected outright
// (t distinct vectors cost at least (t - 1)/4). Otherwise a distinguished chosen
// vector x* fixes the total weight W = w(x*) + r, where r sums the other chosen
// weights (each <= 4D unless equal to x*), and the centroid is y / W with
//   |W x*[i] - y| <= 16 D^2 (t - 1),   w(x*) (W x*[i] - y)^2 <= D W^2,
// clamped to the bounding box.
inline SelectionResult select_l2(const SelectionInstance& inst, const SelectionConfig& cfg = {},
                                 SelectionStats* stats = nullptr) {
  inst.validate();
  detail::require_order(inst, DistanceOrder::Kind::P2, "select_l2");
  if (!inst.budget.is_exact()) throw InvalidInput("select_l2 needs an exact budget");
  const Rational D = inst.budget.exact();
  const std::size_t t = inst.groups.size();

  std::map<Point, std::set<std::size_t>> owners;
  for (std::size_t g = 0; g < t; ++g)
    for (const auto& x : inst.groups[g].points) owners[x].insert(g);
  bool shared = std::any_of(owners.begin(), owners.end(), [](const auto& kv) { return kv.second.size() > 1; });
  if (!shared && Rational(static_cast<long>(t)) > 4 * D + 1) return detail::infeasible();

  auto [lo, hi] = detail::bounding_box(inst);
  const Int numer_bound = floor_of(16 * D * D * Rational(static_cast<long>(t - 1)));
  std::uint64_t leaves = 0;
  detail::CentroidSearch search(inst, cfg, stats, &leaves);

  for (std::size_t gs = 0; gs < t; ++gs) {
    for (std::size_t js = 0; js < inst.groups[gs].points.size(); ++js) {
      const Point& xs = inst.groups[gs].points[js];
      const Weight ws = inst.groups[gs].weights[js];
      // Achievable r over the other groups.
      std::set<Int> sums{Int(0)};
      for (std::size_t g = 0; g < t && !sums.empty(); ++g) {
        if (g == gs) continue;
        std::set<Int> opts;
        for (std::size_t j = 0; j < inst.groups[g].points.size(); ++j) {
          Weight w = inst.groups[g].weights[j];
          if (Rational(static_cast<long long>(w)) <= 4 * D || inst.groups[g].points[j] == xs) opts.insert(Int(w));
        }
        std::set<Int> next;
        for (const auto& s : sums)
          for (const auto& o : opts) next.insert(s + o);
        sums = std::move(next);
      }
      for (const auto& r : sums) {
        Int W = Int(ws) + r;
        Int b2 = floor_root(D * W * W / Rational(Int(ws)), Rational(2));
        Int bound = std::min(numer_bound, b2);
        std::vector<std::vector<Int>> values(inst.dimension);
        bool empty = false;
        for (std::size_t i = 0; i < inst.dimension; ++i) {
          Int centre = W * xs[i];
          Int from = std::max(centre - bound, Int(W * lo[i])), to = std::min(centre + bound, Int(W * hi[i]));
          for (Int y = from; y <= to; ++y) values[i].push_back(y);
          if (values[i].empty()) empty = true;
        }
        if (empty) continue;
        if (auto res = search.run(W, values, &xs, ws)) return detail::finalize(inst, res->chosen, cfg);
      }
    }
  }
  return detail::infeasible();
}

// p = inf. Half-integral centroids within D of a pivot x1 from the first group,
// clamped to the bounding box.
inline SelectionResult select_linf(const SelectionInstance& inst, const SelectionConfig& cfg = {},
                                   SelectionStats* stats = nullptr) {
  inst.validate();
  detail::require_order(inst, DistanceOrder::Kind::PInf, "select_linf");
  if (!inst.budget.is_exact()) throw InvalidInput("select_linf needs an exact budget");
  const Int halves = floor_of(2 * inst.budget.exact());
  auto [lo, hi] = detail::bounding_box(inst);
  std::uint64_t leaves = 0;
  detail::CentroidSearch search(inst, cfg, stats, &leaves);
  const auto& first = inst.groups[0];
  for (std::size_t xi = 0; xi < first.points.size(); ++xi) {
    const Point& x1 = first.points[xi];
    std::vector<std::vector<Int>> values(inst.dimension);
    for (std::size_t i = 0; i < inst.dimension; ++i) {
      Int from = std::max(Int(2 * x1[i] - halves), Int(2 * lo[i])), to = std::min(Int(2 * x1[i] + halves), Int(2 * hi[i]));
      for (Int v = from; v <= to; ++v) values[i].push_back(v);
    }
    if (auto r = search.run(Int(2), values, &x1, first.weights[xi])) return detail::finalize(inst, r->chosen, cfg);
  }
  return detail::infeasible();
}

// p = 0. Every centroid whose i-th coordinate is a value present in coordinate i.
inline SelectionResult select_l0(const SelectionInstance& inst, const SelectionConfig& cfg = {},
                                 SelectionStats* stats = nullptr) {
  inst.validate();
  detail::require_order(inst, DistanceOrder::Kind::P0, "select_l0");
  std::vector<std::set<Int>> present(inst.dimension);
  for (const auto& g : inst.groups)
    for (const auto& x : g.points)
      for (std::size_t i = 0; i < inst.dimension; ++i) present[i].insert(x[i]);
  long double grid = 1;
  for (const auto& s : present) grid *= static_cast<long double>(s.size());
  if (grid > static_cast<long double>(cfg.centroid_cap) * 1e3L) throw CapExceeded("present-value grid exceeds cap");
  std::vector<std::vector<Int>> values;
  for (const auto& s : present) values.emplace_back(s.begin(), s.end());
  std::uint64_t leaves = 0;
  detail::CentroidSearch search(inst, cfg, stats, &leaves);
  if (auto r = search.run(Int(1), values, nullptr, 1)) return detail::finalize(inst, r->chosen, cfg);
  return detail::infeasible();
}

// The specialized solver for the instance's order.
inline SelectionResult select_specialized(const SelectionInstance& inst, const SelectionConfig& cfg = {},
                                          SelectionStats* stats = nullptr) {
  switch (inst.order.kind()) {
    case DistanceOrder::Kind::P01: return select_lp01(inst, cfg, stats);
    case DistanceOrder::Kind::P2: return select_l2(inst, cfg, stats);
    case DistanceOrder::Kind::PInf: return select_linf(inst, cfg, stats);
    case DistanceOrder::Kind::P0: return select_l0(inst, cfg, stats);
  }
  throw InvalidInput("unknown order");
}

// Coordinates where a centroid differs from a point.
inline VertexSet differ_set(const Point& x, const Centroid& c) {
  VertexSet s;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (Rational(x[i]) != c.coords[i]) s.push_back(i);
  return s;
}

}  // namespace kclust
