#include "kclust/centroids.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kclust;
using namespace kclust::testing;

namespace {

WeightedCluster column_cluster(std::initializer_list<long long> vals, std::initializer_list<Weight> w = {}) {
  WeightedCluster c;
  auto wi = w.begin();
  for (long long v : vals) c.add(P({v}), w.size() ? *wi++ : 1);
  return c;
}

// sum w |x - z| at a rational z, exact.
Rational l1_cost_at(const WeightedCluster& c, const Rational& z) {
  Rational s = 0;
  for (std::size_t i = 0; i < c.points.size(); ++i) s += mp::abs(Rational(c.points[i][0]) - z) * c.weights[i];
  return s;
}

double lp_cost_at(const WeightedCluster& c, double z, double p) {
  double s = 0;
  for (std::size_t i = 0; i < c.points.size(); ++i)
    s += static_cast<double>(c.weights[i]) * std::pow(std::fabs(c.points[i][0].convert_to<double>() - z), p);
  return s;
}

}  // namespace

TEST(CentroidL1, Examples) {
  auto r = centroid_l1(column_cluster({2, 3, 6, 8}));
  EXPECT_EQ(r.centroid.coords[0], 3);
  EXPECT_EQ(r.cost, CostValue::integer(9));
  r = centroid_l1(column_cluster({7}, {5}));
  EXPECT_EQ(r.centroid.coords[0], 7);
  EXPECT_TRUE(r.cost.is_zero());
  r = centroid_l1(column_cluster({0, 10}, {3, 1}));
  EXPECT_EQ(r.centroid.coords[0], 0);
  EXPECT_EQ(r.cost, CostValue::integer(10));
}

TEST(CentroidL1, MedianOptimalOnDenseGridProperty) {
  Gen g(101);
  for (int it = 0; it < 500; ++it) {
    WeightedCluster c = g.cluster(static_cast<std::size_t>(g.between(1, 8)), 1, 0, 10, 4);
    auto r = centroid_l1(c);
    Rational best = -1;
    for (int z4 = -8; z4 <= 48; ++z4) {
      Rational v = l1_cost_at(c, Q(z4, 4));
      if (best < 0 || v < best) best = v;
    }
    EXPECT_EQ(r.cost.exact(), best);
    EXPECT_EQ(l1_cost_at(c, r.centroid.coords[0]), best);
  }
}

TEST(CentroidLp01, Examples) {
  auto r = centroid_lp01(column_cluster({2, 3, 6, 8}), Q(1, 2));
  EXPECT_EQ(r.centroid.coords[0], 3);
  Real expect = 1 + mp::sqrt(Real(3)) + mp::sqrt(Real(5));
  EXPECT_LT(mp::abs(cost_eval(r.cost) - expect), Real("1e-40"));
  r = centroid_lp01(column_cluster({4, 4, 4}), Q(1, 2));
  EXPECT_EQ(r.centroid.coords[0], 4);
  EXPECT_TRUE(r.cost.is_zero());
  r = centroid_lp01(column_cluster({0, 1}), Q(1, 2));
  EXPECT_EQ(r.centroid.coords[0], 0);
  EXPECT_LT(mp::abs(cost_eval(r.cost) - 1), Real("1e-40"));
}

TEST(CentroidLp01, PresentValueOptimalOnFineGridProperty) {
  Gen g(202);
  for (int it = 0; it < 500; ++it) {
    WeightedCluster c = g.cluster(static_cast<std::size_t>(g.between(1, 8)), 1, 0, 10, 4);
    Rational p = g.coin() ? Q(1, 2) : Q(1, 3);
    auto r = centroid_lp01(c, p);
    double pd = p.convert_to<double>();
    double got = static_cast<double>(cost_eval(r.cost));
    long long lo = 10, hi = 0;
    for (auto& x : c.points) {
      lo = std::min(lo, x[0].convert_to<long long>());
      hi = std::max(hi, x[0].convert_to<long long>());
    }
    for (double z = static_cast<double>(lo); z <= static_cast<double>(hi) + 1e-12; z += 0.01)
      EXPECT_LE(got, lp_cost_at(c, z, pd) + 1e-9);
  }
}

TEST(CentroidL2, Examples) {
  auto r = centroid_l2(WeightedCluster(Ps({{0, 0}, {2, 0}, {1, 3}})));
  EXPECT_EQ(r.centroid, (Centroid{{Q(1), Q(1)}}));
  EXPECT_EQ(r.cost.exact(), 8);
  r = centroid_l2(WeightedCluster(Ps({{4, -1}})));
  EXPECT_TRUE(r.cost.is_zero());
  r = centroid_l2(column_cluster({0, 1}, {1, 2}));
  EXPECT_EQ(r.centroid.coords[0], Q(2, 3));
  EXPECT_EQ(r.cost.exact(), Q(2, 3));
}

TEST(CentroidL2, MeanBeatsPerturbationsProperty) {
  Gen g(303);
  for (int it = 0; it < 300; ++it) {
    WeightedCluster c = g.cluster(static_cast<std::size_t>(g.between(1, 6)), 3, -3, 3, 3);
    auto r = centroid_l2(c);
    for (std::size_t j = 0; j < 3; ++j)
      for (Rational eps : {Q(1, 7), Q(-1, 7), Q(1, 1000), Q(-1, 1000)}) {
        Centroid moved = r.centroid;
        moved.coords[j] += eps;
        EXPECT_LT(r.cost.exact(), cluster_cost_at(DistanceOrder::l2(), c, moved).exact());
      }
  }
}

TEST(CentroidL0, Examples) {
  auto r = centroid_l0(column_cluster({1, 1, 2}));
  EXPECT_EQ(r.centroid.coords[0], 1);
  EXPECT_EQ(r.cost, CostValue::integer(1));
  r = centroid_l0(column_cluster({2, 1}));
  EXPECT_EQ(r.centroid.coords[0], 1);
}

TEST(CentroidL0, ModeIsOptimalProperty) {
  Gen g(404);
  for (int it = 0; it < 300; ++it) {
    WeightedCluster c = g.cluster(static_cast<std::size_t>(g.between(1, 6)), 2, 0, 4, 3);
    auto r = centroid_l0(c);
    for (int a = -1; a <= 5; ++a)
      for (int b = -1; b <= 5; ++b)
        EXPECT_LE(r.cost.exact(), cluster_cost_at(DistanceOrder::l0(), c, centroid_of(P({a, b}))).exact());
  }
}

TEST(CentroidLinf, FigureClusterAllRoutes) {
  WeightedCluster c(Ps({{0, -2, 0, -2, 0}, {0, 0, -2, 0, -2}}));
  EXPECT_EQ(centroid_linf_lp(c).cost, CostValue::halves(4));
  EXPECT_EQ(centroid_linf_grid(c).cost, CostValue::halves(4));
  EXPECT_EQ(centroid_linf_pairwise(c).cost, CostValue::halves(4));
  Centroid paper{{Q(0), Q(-1), Q(-1), Q(-1), Q(-1)}};
  EXPECT_EQ(cluster_cost_at(DistanceOrder::linf(), c, paper), CostValue::halves(4));
}

TEST(CentroidLinf, SmallExamples) {
  WeightedCluster one(Ps({{3, -1}}));
  EXPECT_TRUE(centroid_linf_lp(one).cost.is_zero());
  EXPECT_TRUE(centroid_linf_grid(one).cost.is_zero());
  EXPECT_EQ(centroid_linf_lp(column_cluster({0, 3})).cost, CostValue::halves(6));
  WeightedCluster diag(Ps({{0, 0}, {1, 1}}));
  EXPECT_EQ(centroid_linf_grid(diag).cost, CostValue::halves(2));
  EXPECT_EQ(cluster_cost_at(DistanceOrder::linf(), diag, Centroid{{Q(1, 2), Q(1, 2)}}), CostValue::halves(2));
}

TEST(CentroidLinf, GridCapIsEnforced) {
  WeightedCluster c(Ps({{0, 0, 0}, {100, 100, 100}}));
  EXPECT_THROW(centroid_linf_grid(c, 1000), CapExceeded);
}

TEST(CentroidLinf, LpGridAndPairwiseAgreeProperty) {
  Gen g(505);
  for (int it = 0; it < 300; ++it) {
    WeightedCluster c = g.cluster(static_cast<std::size_t>(g.between(1, 5)), static_cast<std::size_t>(g.between(1, 4)),
                                  -2, 2, 3);
    auto lp = centroid_linf_lp(c);
    auto grid = centroid_linf_grid(c);
    auto pw = centroid_linf_pairwise(c);
    EXPECT_EQ(lp.cost.exact(), grid.cost.exact());
    EXPECT_EQ(pw.cost.exact(), grid.cost.exact());
    EXPECT_EQ(cluster_cost_at(DistanceOrder::linf(), c, pw.centroid), pw.cost);
    for (const auto& q : pw.centroid.coords) EXPECT_EQ(mp::denominator(q * 2), 1);
  }
}

TEST(CentroidLinf, PairwiseHandlesLargeCoordinates) {
  WeightedCluster c(Ps({{0, 0}, {4, 0}}));
  c.points[1][0] = Int("100000000000000000000000");
  auto pw = centroid_linf_pairwise(c);
  EXPECT_EQ(pw.cost.exact(), Rational(Int("100000000000000000000000")));
}

TEST(BinaryCoordinateCost, Examples) {
  auto r = binary_coordinate_cost(1, 2, Q(2));
  EXPECT_LT(mp::abs(r.centroid - Real(2) / 3), Real("1e-45"));
  EXPECT_LT(mp::abs(r.contribution - Real(2) / 3), Real("1e-45"));
  r = binary_coordinate_cost(1, 1, Q(2));
  EXPECT_LT(mp::abs(r.centroid - Real("0.5")), Real("1e-45"));
  EXPECT_LT(mp::abs(r.contribution - Real("0.5")), Real("1e-45"));
  r = binary_coordinate_cost(1, 1, Q(3));
  EXPECT_LT(mp::abs(r.centroid - Real("0.5")), Real("1e-45"));
  EXPECT_LT(mp::abs(r.contribution - Real("0.25")), Real("1e-45"));
  r = binary_coordinate_cost(0, 3, Q(3, 2));
  EXPECT_EQ(r.centroid, 1);
  EXPECT_EQ(r.contribution, 0);
  EXPECT_THROW(binary_coordinate_cost(0, 0, Q(2)), InvalidInput);
}

TEST(BinaryCoordinateCost, MatchesTernarySearch) {
  for (auto p : {Q(3, 2), Q(2), Q(3)}) {
    double pd = p.convert_to<double>();
    for (int a = 0; a <= 10; ++a)
      for (int b = 0; b <= 10; ++b) {
        if (a + b == 0) continue;
        auto f = [&](long double z) {
          return a * std::pow(z, static_cast<long double>(pd)) + b * std::pow(1 - z, static_cast<long double>(pd));
        };
        long double lo = 0, hi = 1;
        for (int k = 0; k < 200; ++k) {
          long double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
          if (f(m1) < f(m2)) hi = m2; else lo = m1;
        }
        auto r = binary_coordinate_cost(a, b, p);
        EXPECT_NEAR(static_cast<double>(r.contribution), static_cast<double>(f((lo + hi) / 2)), 1e-9);
      }
  }
}

TEST(BinaryCoordinateCost, MoreOnesRatioStrictlyDecreasing) {
  for (auto p : {Q(3, 2), Q(2), Q(3)})
    for (int s = 2; s <= 12; ++s) {
      Real prev = -1;
      for (int b = 1; b < s; ++b) {
        Real ratio = binary_coordinate_cost(s - b, b, p).contribution / b;
        if (b > 1) {
          EXPECT_LT(ratio, prev) << "s=" << s << " b=" << b;
        }
        prev = ratio;
      }
    }
}

// A value shared by at least half the weight is an optimal coordinate value;
// with a strict majority it is the one returned.
TEST(HalfWeightFixing, MajorityValueIsOptimalProperty) {
  Gen g(606);
  for (int it = 0; it < 1000; ++it) {
    WeightedCluster c = g.cluster(static_cast<std::size_t>(g.between(1, 6)), 2, 0, 5, 4);
    long long v = g.between(0, 5);
    Weight other = c.total_weight();
    bool strict = g.coin();
    c.add(P({v, g.between(0, 5)}), other + (strict ? 1 : 0));
    auto r1 = centroid_l1(c);
    auto rp = centroid_lp01(c, Q(1, 2));
    Centroid at_v1 = r1.centroid, at_vp = rp.centroid;
    at_v1.coords[0] = v;
    at_vp.coords[0] = v;
    EXPECT_EQ(cluster_cost_at(DistanceOrder::l1(), c, at_v1), r1.cost);
    EXPECT_TRUE(cost_le(cluster_cost_at(DistanceOrder::lp(Q(1, 2)), c, at_vp), rp.cost));
    if (strict) {
      EXPECT_EQ(r1.centroid.coords[0], v);
      EXPECT_EQ(rp.centroid.coords[0], v);
    }
  }
}
