#include "checks.hpp"
#include "figures.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kclust;
using namespace kclust::testing;

namespace {

SolveConfig exhaustive() {
  SolveConfig cfg;
  cfg.policy = IterationPolicy::Exhaustive;
  return cfg;
}

const std::vector<DistanceOrder>& all_orders() {
  static const std::vector<DistanceOrder> orders{DistanceOrder::lp(Q(1, 2)), DistanceOrder::l1(), DistanceOrder::l2(),
                                                 DistanceOrder::linf(), DistanceOrder::l0()};
  return orders;
}

}  // namespace

TEST(ColorPartitions, SmallListings) {
  auto two = enumerate_color_partitions({1, 2});
  ASSERT_EQ(two.size(), 2u);
  EXPECT_TRUE(two[0].empty());
  EXPECT_EQ(two[1], (ColorPartition{{1, 2}}));

  auto three = enumerate_color_partitions({3, 1, 2});
  std::vector<ColorPartition> expected{{}, {{1, 2}}, {{1, 3}}, {{2, 3}}, {{1, 2, 3}}};
  EXPECT_EQ(three, expected);

  auto one = enumerate_color_partitions({7});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_TRUE(one[0].empty());
}

TEST(ColorPartitions, CountsAreBellNumbersAndDistinct) {
  // Families of parts of size >= 2 on s colors = set partitions of s items.
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877};
  for (std::size_t s = 0; s < 8; ++s) {
    std::vector<std::size_t> used;
    for (std::size_t c = 0; c < s; ++c) used.push_back(c);
    auto fams = enumerate_color_partitions(used);
    EXPECT_EQ(fams.size(), bell[s]) << s;
    std::set<ColorPartition> uniq(fams.begin(), fams.end());
    EXPECT_EQ(uniq.size(), fams.size());
    for (const auto& f : fams) {
      std::set<std::size_t> covered;
      for (const auto& part : f) {
        EXPECT_GE(part.size(), 2u);
        for (auto c : part) EXPECT_TRUE(covered.insert(c).second);
      }
    }
  }
}

TEST(ColorPartitions, ClusterCount) {
  EXPECT_EQ(cluster_count(8, {{1, 2}, {3, 4, 5}}), 5u);
  EXPECT_EQ(cluster_count(8, {}), 8u);
  EXPECT_EQ(cluster_count(3, {{0, 1, 2}}), 1u);
}

TEST(ColorCoding, L0Figure) {
  SolveConfig cfg;
  cfg.seed = 7;
  auto inst = l0_figure_clustering();
  auto r = solve_color_coding(inst, cfg);
  ASSERT_TRUE(r.decision);
  ASSERT_TRUE(r.clustering);
  EXPECT_TRUE(clustering_valid(inst, *r.clustering));
  EXPECT_EQ(r.clustering->total_cost, CostValue::integer(3));
  EXPECT_EQ(r.stats.T, 6u);
  std::size_t composite = 0;
  for (const auto& c : r.clustering->clusters) {
    if (c.points.size() < 2) continue;
    ++composite;
    std::set<Point> got(c.points.begin(), c.points.end());
    std::set<Point> want{P({1, 2, l0_pad(1, 2, 1)}), P({1, l0_pad(1, 3, 3), 4}), P({l0_pad(2, 3, 4), 2, 4})};
    EXPECT_EQ(got, want);
  }
  EXPECT_EQ(composite, 1u);
}

TEST(ColorCoding, AllSimpleWhenKCoversInitialClusters) {
  ClusteringInstance inst;
  inst.dataset = Dataset(2, Ps({{0, 0}, {0, 0}, {5, 1}}), {});
  inst.k = 2;
  inst.budget = CostValue::integer(0);
  auto r = solve_color_coding(inst);
  ASSERT_TRUE(r.decision);
  EXPECT_EQ(r.clustering->clusters.size(), 2u);
  EXPECT_TRUE(r.clustering->total_cost.is_zero());
  EXPECT_TRUE(clustering_valid(inst, *r.clustering));
}

TEST(ColorCoding, LinfFigure) {
  auto inst = linf_figure_clustering();
  auto r = solve_color_coding(inst, exhaustive());
  ASSERT_TRUE(r.decision);
  EXPECT_TRUE(clustering_valid(inst, *r.clustering));
  EXPECT_EQ(r.clustering->total_cost.exact(), 3);
  bool found = false;
  for (std::size_t b = 0; b < r.clustering->members.size(); ++b)
    if (r.clustering->clusters[b].points.size() == 3) {
      std::set<Point> got(r.clustering->clusters[b].points.begin(), r.clustering->clusters[b].points.end());
      auto x = linf_figure_points();
      EXPECT_EQ(got, (std::set<Point>{x[0], x[1], x[3]}));
      found = true;
    }
  EXPECT_TRUE(found);
  EXPECT_FALSE(solve_color_coding(linf_figure_clustering(5), exhaustive()).decision);
}

TEST(ColorCoding, TooSmallBudgetNeedsNoColoring) {
  ClusteringInstance inst;
  inst.dataset = Dataset(1, Ps({{0}, {1}, {2}}), {});
  inst.k = 2;
  inst.order = DistanceOrder::l2();
  inst.budget = CostValue::rational(Q(1, 10));
  auto r = solve_color_coding(inst);
  EXPECT_FALSE(r.decision);
  EXPECT_EQ(r.stats.T, 1u);
  EXPECT_EQ(r.stats.iterations_run, 0u);
}

TEST(ColorCoding, Caps) {
  SolveConfig cfg = exhaustive();
  cfg.coloring_cap = 10;
  EXPECT_THROW(solve_color_coding(linf_figure_clustering(), cfg), CapExceeded);
  SolveConfig small_t;
  small_t.max_T = 3;
  EXPECT_THROW(solve_color_coding(linf_figure_clustering(), small_t), CapExceeded);
}

TEST(ColorCoding, ConfidenceReported) {
  SolveConfig cfg;
  cfg.policy = IterationPolicy::Explicit;
  cfg.iterations = 5;
  auto r = solve_color_coding(linf_figure_clustering(5), cfg);
  EXPECT_FALSE(r.decision);
  EXPECT_EQ(r.stats.iterations_run, 5u);
  EXPECT_EQ(r.stats.T, 10u);
  EXPECT_NEAR(r.stats.confidence, 1 - std::pow(1 - std::exp(-10.0), 5), 1e-12);
}

TEST(ColorCoding, SeedDeterminism) {
  SolveConfig cfg;
  cfg.seed = 99;
  auto a = solve_color_coding(l0_figure_clustering(), cfg);
  auto b = solve_color_coding(l0_figure_clustering(), cfg);
  EXPECT_EQ(a.stats.iterations_run, b.stats.iterations_run);
  EXPECT_EQ(a.clustering->members, b.clustering->members);
}

TEST(Bruteforce, LinfOctFigure) {
  auto inst = linfoct_figure_clustering();
  // The drawn clustering {x1, x2}, {x3, x4} has cost 4 + 2 = 6.
  auto pts = inst.dataset.points;
  auto cost_of = [&](std::vector<Point> c) { return optimal_centroid(inst.order, WeightedCluster(c)).cost.exact(); };
  EXPECT_EQ(cost_of({pts[0], pts[1]}) + cost_of({pts[2], pts[3]}), 6);
  // Pairwise gaps 4, 4, 2 give {x2, x3, x4} radii 3, 1, 1: cost 5 beats it.
  EXPECT_EQ(cost_of({pts[1], pts[2], pts[3]}), 5);
  auto r = solve_bruteforce(inst);
  ASSERT_TRUE(r.min_known);
  EXPECT_EQ(r.min_cost.exact(), 5);
  EXPECT_TRUE(r.decision);
  EXPECT_TRUE(solve_bruteforce(linfoct_figure_clustering(5)).decision);
  auto below = linfoct_figure_clustering();
  below.budget = CostValue::halves(9);
  EXPECT_FALSE(solve_bruteforce(below).decision);
}

TEST(Bruteforce, SinglePointAndCap) {
  ClusteringInstance inst;
  inst.dataset = Dataset(2, Ps({{1, 1}}), {3});
  inst.budget = CostValue::integer(0);
  auto r = solve_bruteforce(inst);
  EXPECT_TRUE(r.decision);
  EXPECT_TRUE(r.min_cost.is_zero());
  EXPECT_THROW(solve_bruteforce(l0_figure_clustering()), CapExceeded);
}

TEST(Bruteforce, L0FigureMinimum) {
  BruteforceConfig cfg;
  cfg.cap = 12;
  auto r = solve_bruteforce(l0_figure_clustering(), cfg);
  EXPECT_EQ(r.min_cost, CostValue::integer(3));
  cfg.decision_only = true;
  auto no = solve_bruteforce(l0_figure_clustering(2), cfg);
  EXPECT_FALSE(no.decision);
  EXPECT_FALSE(no.min_known);
}

TEST(Bruteforce, MatchesPlainEnumeration) {
  // Unpruned enumeration of set partitions as an independent oracle.
  Gen g(31);
  for (const auto& order : all_orders()) {
    for (int i = 0; i < 15; ++i) {
      auto inst = random_clustering(g, order);
      auto ic = regularize(inst.dataset);
      std::optional<CostValue> best;
      std::vector<std::size_t> rgs(ic.size(), 0);
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t blocks) {
        if (i == ic.size()) {
          std::vector<WeightedCluster> bl(blocks);
          for (std::size_t j = 0; j < ic.size(); ++j) bl[rgs[j]].add(ic[j].representative, ic[j].size);
          CostValue s = zero_cost(order);
          for (const auto& b : bl) s += optimal_centroid(order, b).cost;
          if (!best || cost_lt(s, *best)) best = s;
          return;
        }
        for (std::size_t b = 0; b <= blocks && b < inst.k; ++b) {
          rgs[i] = b;
          rec(i + 1, std::max(blocks, b + 1));
        }
      };
      rec(0, 0);
      auto r = solve_bruteforce(inst);
      ASSERT_TRUE(cost_le(r.min_cost, *best) && cost_le(*best, r.min_cost)) << order.to_string() << " " << i;
      EXPECT_TRUE(clustering_valid(ClusteringInstance{inst.dataset, inst.k, r.min_cost, order}, *r.clustering));
    }
  }
}

TEST(ColorCoding, ExhaustiveMatchesBruteforce) {
  Gen g(32);
  for (const auto& order : all_orders()) {
    for (int i = 0; i < 30; ++i) {
      auto inst = random_clustering(g, order);
      auto oracle = solve_bruteforce(inst);
      auto r = solve_color_coding(inst, exhaustive());
      ASSERT_EQ(r.decision, oracle.decision)
          << order.to_string() << " " << i << " budget " << inst.budget.to_string() << " min "
          << oracle.min_cost.to_string();
      if (r.decision) {
        EXPECT_TRUE(clustering_valid(inst, *r.clustering)) << order.to_string() << " " << i;
      }
    }
  }
}

TEST(ColorCoding, RandomizedIsOneSided) {
  Gen g(33);
  for (const auto& order : all_orders()) {
    for (int i = 0; i < 20; ++i) {
      auto inst = random_clustering(g, order);
      SolveConfig cfg;
      cfg.seed = static_cast<std::uint64_t>(i);
      cfg.policy = IterationPolicy::Explicit;
      cfg.iterations = 3;
      auto r = solve_color_coding(inst, cfg);
      if (r.decision) {
        EXPECT_TRUE(solve_bruteforce(inst).decision) << order.to_string() << " " << i;
        EXPECT_TRUE(clustering_valid(inst, *r.clustering));
      }
    }
  }
}

TEST(ColorCoding, OracleSelectionModeAgrees) {
  Gen g(34);
  SolveConfig oracle_mode = exhaustive();
  oracle_mode.selection_mode = SelectionMode::Oracle;
  for (int i = 0; i < 20; ++i) {
    auto inst = random_clustering(g, DistanceOrder::l1());
    EXPECT_EQ(solve_color_coding(inst, exhaustive()).decision, solve_color_coding(inst, oracle_mode).decision) << i;
  }
}

TEST(ColoringEstimate, MatchesClosedForm) {
  EXPECT_EQ(coloring_success_estimate(1, 100, 1).estimate, 1.0);
  for (std::size_t T = 2; T <= 6; ++T) {
    auto e = coloring_success_estimate(T, 10000, T);
    EXPECT_LE(std::fabs(e.estimate - e.exact), 3 * e.sigma) << T;
  }
  EXPECT_NEAR(coloring_success_estimate(4, 10, 0).exact, 0.09375, 1e-15);
  EXPECT_THROW(coloring_success_estimate(0, 10, 0), InvalidInput);
}
