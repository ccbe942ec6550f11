#pragma once

// Hand-built copies of the worked example instances. Kept independent of the
// generators so generator output can be compared against them.

#include "support.hpp"

namespace kclust::testing {

// Graph on {1,2,3,4} with edges 12, 13, 14, 24; colors 1 | 2,3 | 4.

// L1 selection: X pairs then mirrored Y pairs, boundary values 0 and 5.
inline SelectionInstance l1_figure_selection(long long budget = 15) {
  SelectionInstance s;
  s.dimension = 3;
  s.order = DistanceOrder::l1();
  s.groups = {WeightedCluster(Ps({{1, 2, 0}, {1, 3, 0}})), WeightedCluster(Ps({{1, 0, 4}})),
              WeightedCluster(Ps({{0, 2, 4}})),           WeightedCluster(Ps({{1, 2, 5}, {1, 3, 5}})),
              WeightedCluster(Ps({{1, 5, 4}})),           WeightedCluster(Ps({{5, 2, 4}}))};
  s.budget = CostValue::integer(budget);
  return s;
}

// L0 padding: |V| + (k i + j) |E| + e with |V| = |E| = 4, k = 3.
inline long long l0_pad(long long i, long long j, long long e) { return 4 + (3 * i + j) * 4 + e; }

inline SelectionInstance l0_figure_selection(long long budget = 3) {
  SelectionInstance s;
  s.dimension = 3;
  s.order = DistanceOrder::l0();
  s.groups = {WeightedCluster(Ps({{1, 2, l0_pad(1, 2, 1)}, {1, 3, l0_pad(1, 2, 2)}})),
              WeightedCluster(Ps({{1, l0_pad(1, 3, 3), 4}})), WeightedCluster(Ps({{l0_pad(2, 3, 4), 2, 4}}))};
  s.budget = CostValue::integer(budget);
  return s;
}

inline ClusteringInstance l0_figure_clustering(long long budget = 3) {
  const long long edges[4][2] = {{1, 2}, {1, 3}, {1, 4}, {2, 4}};
  std::vector<Point> pts;
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j)
      for (int e = 1; e <= 4; ++e) {
        Point x(3, Int(l0_pad(i, j, e)));
        x[i - 1] = edges[e - 1][0];
        x[j - 1] = edges[e - 1][1];
        pts.push_back(x);
      }
  ClusteringInstance c;
  c.dataset = Dataset(3, pts, {});
  c.k = 10;
  c.budget = CostValue::integer(budget);
  c.order = DistanceOrder::l0();
  return c;
}

// Graph on {1..5}, edges 12 13 14 24 35 45; non-edge columns 23 34 15 25.
inline std::vector<Point> linf_figure_points() {
  return Ps({{2, 0, 0, 0, 0, 0, 0, 2, 0},
             {0, 2, 0, 0, 0, 2, 0, 0, 2},
             {0, 0, 2, 0, 0, -2, 2, 0, 0},
             {0, 0, 0, 2, 0, 0, -2, 0, 0},
             {0, 0, 0, 0, 2, 0, 0, -2, -2}});
}

inline ClusteringInstance linf_figure_clustering(long long halves = 6) {
  ClusteringInstance c;
  c.dataset = Dataset(9, linf_figure_points(), {});
  c.k = 3;
  c.budget = CostValue::halves(halves);
  c.order = DistanceOrder::linf();
  return c;
}

inline SelectionInstance linf_figure_selection(long long halves = 6) {
  auto x = linf_figure_points();
  SelectionInstance s;
  s.dimension = 9;
  s.order = DistanceOrder::linf();
  s.groups = {WeightedCluster({x[0]}), WeightedCluster({x[1], x[2]}), WeightedCluster({x[3], x[4]})};
  s.budget = CostValue::halves(halves);
  return s;
}

// Graph on {1..4}, edges 12 13 14 23 24, t = 2, no isolated edges added.
inline ClusteringInstance linfoct_figure_clustering(long long budget = 6) {
  ClusteringInstance c;
  c.dataset = Dataset(5, Ps({{2, 2, 2, 0, 0}, {-2, 0, 0, 2, 2}, {0, -2, 0, -2, 0}, {0, 0, -2, 0, -2}}), {});
  c.k = 2;
  c.budget = CostValue::halves(2 * budget);
  c.order = DistanceOrder::linf();
  return c;
}

// Edge indicators over the 4 vertices, groups X12, X13, X23 by color pair.
inline SelectionInstance lp_figure_selection(const Rational& budget = Q(2)) {
  SelectionInstance s;
  s.dimension = 4;
  s.order = DistanceOrder::l2();
  s.groups = {WeightedCluster(Ps({{1, 1, 0, 0}, {1, 0, 1, 0}})), WeightedCluster(Ps({{1, 0, 0, 1}})),
              WeightedCluster(Ps({{0, 1, 0, 1}}))};
  s.budget = CostValue::rational(budget);
  return s;
}

}  // namespace kclust::testing
