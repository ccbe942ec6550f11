#pragma once

#include "kclust/core.hpp"
#include "kclust/instances.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace kclust::testing {

inline Point P(std::initializer_list<long long> xs) {
  Point p;
  for (long long x : xs) p.emplace_back(x);
  return p;
}

inline std::vector<Point> Ps(std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<Point> out;
  for (auto r : rows) out.push_back(P(r));
  return out;
}

inline Rational Q(long long a, long long b = 1) { return Rational(Int(a), Int(b)); }

// Small seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  long long between(long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(between(0, static_cast<long long>(n) - 1)); }
  bool coin() { return between(0, 1) == 1; }
  Point point(std::size_t d, long long lo, long long hi) {
    Point p;
    for (std::size_t i = 0; i < d; ++i) p.emplace_back(between(lo, hi));
    return p;
  }
  WeightedCluster cluster(std::size_t n, std::size_t d, long long lo, long long hi, Weight max_w = 1) {
    WeightedCluster c;
    for (std::size_t i = 0; i < n; ++i) c.add(point(d, lo, hi), static_cast<Weight>(between(1, static_cast<long long>(max_w))));
    return c;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct SelectionEnvelope {
  std::size_t max_groups = 3, max_group_size = 3, max_dim = 4;
  long long lo = 0, hi = 3;
  Weight max_weight = 2;
  long long max_budget = 4;
};

// Random selection instance within the envelope; the budget is drawn from the
// order's natural grid (integers, halves, z/s^2, or basis values).
inline SelectionInstance random_selection(Gen& g, const DistanceOrder& order, const SelectionEnvelope& env = {}) {
  SelectionInstance inst;
  inst.order = order;
  inst.dimension = static_cast<std::size_t>(g.between(1, static_cast<long long>(env.max_dim)));
  std::size_t t = static_cast<std::size_t>(g.between(1, static_cast<long long>(env.max_groups)));
  for (std::size_t i = 0; i < t; ++i)
    inst.groups.push_back(g.cluster(static_cast<std::size_t>(g.between(1, static_cast<long long>(env.max_group_size))),
                                    inst.dimension, env.lo, env.hi, env.max_weight));
  long long top = env.max_budget;
  switch (order.kind()) {
    case DistanceOrder::Kind::PInf: inst.budget = CostValue::halves(g.between(0, 2 * top)); break;
    case DistanceOrder::Kind::P2:
      if (g.coin()) {
        std::size_t w = 0;
        for (const auto& grp : inst.groups) w += static_cast<std::size_t>(grp.total_weight());
        auto set = enumerate_cost_set(order, CostValue::integer(top), w);
        inst.budget = set.members[g.index(set.members.size())];
      } else {
        inst.budget = CostValue::rational(Rational(g.between(0, 4 * top), 4));
      }
      break;
    case DistanceOrder::Kind::P01:
      if (order.is_fractional() && g.coin()) {
        auto set = enumerate_cost_set(order, CostValue::integer(top), 0);
        inst.budget = set.members[g.index(set.members.size())];
        break;
      }
      [[fallthrough]];
    default: inst.budget = CostValue::integer(g.between(0, top));
  }
  return inst;
}

// Vectors that differ from a common base in one or two coordinates by +-1, so
// feasible centroids are rarely input vectors.
inline SelectionInstance perturbed_selection(Gen& g, const DistanceOrder& order, std::size_t max_groups = 4,
                                             std::size_t dim = 4, long long max_budget = 4) {
  SelectionInstance inst;
  inst.order = order;
  inst.dimension = dim;
  Point base = g.point(dim, 1, 3);
  std::size_t t = static_cast<std::size_t>(g.between(2, static_cast<long long>(max_groups)));
  for (std::size_t i = 0; i < t; ++i) {
    WeightedCluster grp;
    std::size_t size = static_cast<std::size_t>(g.between(1, 3));
    for (std::size_t j = 0; j < size; ++j) {
      Point x = base;
      int changes = static_cast<int>(g.between(1, 2));
      for (int c = 0; c < changes; ++c) x[g.index(dim)] += g.coin() ? 1 : -1;
      grp.add(x, 1);
    }
    inst.groups.push_back(std::move(grp));
  }
  inst.budget = CostValue::integer(g.between(1, max_budget));
  return inst;
}

struct ClusteringEnvelope {
  std::size_t max_initial = 6, max_dim = 3;
  long long lo = 0, hi = 3;
  Weight max_multiplicity = 2;
  std::size_t max_k = 4;
  long long max_budget = 4;
};

// Random clustering instance whose budget is a member of the candidate cost set.
inline ClusteringInstance random_clustering(Gen& g, const DistanceOrder& order, const ClusteringEnvelope& env = {}) {
  ClusteringInstance inst;
  inst.order = order;
  std::size_t d = static_cast<std::size_t>(g.between(1, static_cast<long long>(env.max_dim)));
  std::size_t m = static_cast<std::size_t>(g.between(1, static_cast<long long>(env.max_initial)));
  std::vector<Point> pts;
  std::vector<Weight> mult;
  for (std::size_t i = 0; i < m; ++i) {
    pts.push_back(g.point(d, env.lo, env.hi));
    mult.push_back(static_cast<Weight>(g.between(1, static_cast<long long>(env.max_multiplicity))));
  }
  inst.dataset = Dataset(d, pts, mult);
  inst.k = static_cast<std::size_t>(g.between(1, static_cast<long long>(env.max_k)));
  auto set = enumerate_cost_set(order, CostValue::integer(g.between(0, env.max_budget)), inst.dataset.n());
  inst.budget = set.members[g.index(set.members.size())];
  return inst;
}

}  // namespace kclust::testing
