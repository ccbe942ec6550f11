#include "checks.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace kclust;
using namespace kclust::testing;

namespace {

// Pivot x1 and four more vectors over five coordinates; the cluster
// {x1, x4, x5} with centroid (0,2,2,3,2) costs 2.
SelectionInstance coordinates_figure() {
  SelectionInstance inst;
  inst.dimension = 5;
  inst.order = DistanceOrder::l1();
  inst.budget = CostValue::integer(2);
  inst.groups = {WeightedCluster(Ps({{0, 2, 1, 3, 2}})), WeightedCluster(Ps({{0, 1, 1, 3, 1}, {0, 2, 2, 3, 2}})),
                 WeightedCluster(Ps({{1, 2, 1, 3, 1}, {0, 2, 2, 3, 1}}))};
  return inst;
}

Hypergraph make_hg(std::size_t n, std::vector<std::pair<VertexSet, Weight>> edges) {
  Hypergraph h;
  h.num_vertices = n;
  for (auto& [v, m] : edges) h.edges.push_back({v, m});
  return h;
}


// Every injective map pattern -> host vertices, checked directly.
std::set<VertexSet> appearances_oracle(const Hypergraph& pat, const Hypergraph& host) {
  std::set<VertexSet> out;
  std::vector<std::size_t> pi;
  std::vector<char> used(host.num_vertices, 0);
  std::function<void()> rec = [&]() {
    if (pi.size() == pat.num_vertices) {
      if (appearance_holds(pat, host, pi)) {
        VertexSet s(pi.begin(), pi.end());
        std::sort(s.begin(), s.end());
        out.insert(s);
      }
      return;
    }
    for (std::size_t v = 0; v < host.num_vertices; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      pi.push_back(v);
      rec();
      pi.pop_back();
      used[v] = 0;
    }
  };
  rec();
  return out;
}

}  // namespace

TEST(DifferenceHypergraph, CoordinatesFigure) {
  auto inst = coordinates_figure();
  auto dh = build_difference_hypergraph(inst.groups[0].points[0], inst, inst.budget);
  std::set<VertexSet> nonempty;
  std::size_t empty = 0;
  for (const auto& e : dh.graph.edges) {
    EXPECT_EQ(e.multiplicity, 1u);
    if (e.vertices.empty()) ++empty; else nonempty.insert(e.vertices);
  }
  EXPECT_EQ(empty, 1u);  // the pivot itself
  // 1-based: {2,5}, {1,5}, {3}, {3,5}
  EXPECT_EQ(nonempty, (std::set<VertexSet>{{1, 4}, {0, 4}, {2}, {2, 4}}));
  ASSERT_EQ(dh.sources.size(), dh.graph.edges.size());
  EXPECT_EQ(dh.sources[2].group, 1u);
  EXPECT_EQ(dh.sources[2].index, 1u);
}

TEST(DifferenceHypergraph, EqualVectorsGiveEmptyEdges) {
  SelectionInstance inst;
  inst.dimension = 2;
  inst.budget = CostValue::integer(1);
  inst.groups = {WeightedCluster(Ps({{3, 4}})), WeightedCluster(Ps({{3, 4}}))};
  auto dh = build_difference_hypergraph(P({3, 4}), inst, inst.budget);
  ASSERT_EQ(dh.graph.edges.size(), 2u);
  for (const auto& e : dh.graph.edges) EXPECT_TRUE(e.vertices.empty());
}

TEST(DifferenceHypergraph, CutOffRules) {
  SelectionInstance inst;
  inst.dimension = 3;
  inst.budget = CostValue::integer(2);
  inst.groups = {WeightedCluster(Ps({{0, 0, 0}})), WeightedCluster(Ps({{1, 1, 1}, {1, 1, 0}, {1, 0, 0}}), {1, 1, 3})};
  auto dh = build_difference_hypergraph(P({0, 0, 0}), inst, inst.budget);
  // (1,1,1) differs in 3 > D coordinates; (1,0,0) has weight 3 > D.
  ASSERT_EQ(dh.graph.edges.size(), 2u);
  EXPECT_EQ(dh.graph.edges[1].vertices, (VertexSet{0, 1}));
  EXPECT_THROW(build_difference_hypergraph(P({0, 0}), inst, inst.budget), InvalidInput);
}

TEST(QuarterCover, Examples) {
  EXPECT_TRUE(quarter_cover_holds(make_hg(1, {{{0}, 2}})));
  EXPECT_FALSE(quarter_cover_holds(make_hg(2, {{{0}, 4}})));
  EXPECT_TRUE(quarter_cover_holds(make_hg(1, {{{0}, 1}, {{0}, 1}})));
  // 1 of 4 edges is exactly a quarter; 1 of 5 is not.
  EXPECT_TRUE(quarter_cover_holds(make_hg(2, {{{0}, 3}, {{0, 1}, 1}})));
  EXPECT_FALSE(quarter_cover_holds(make_hg(2, {{{0}, 4}, {{0, 1}, 1}})));
}

TEST(Patterns, DOneIsSingleVertexSingleEdge) {
  auto pats = enumerate_patterns(1);
  ASSERT_EQ(pats.size(), 1u);
  EXPECT_EQ(pats[0].num_vertices, 1u);
  ASSERT_EQ(pats[0].edges.size(), 1u);
  EXPECT_EQ(pats[0].edges[0], (HyperEdge{{0}, 1}));
}

TEST(Patterns, DTwoContents) {
  auto pats = enumerate_patterns(2);
  std::set<std::pair<std::size_t, std::vector<VertexSet>>> keys;
  for (const auto& h : pats) {
    EXPECT_TRUE(quarter_cover_holds(h));
    keys.insert({h.num_vertices, canonical_key(h)});
  }
  EXPECT_TRUE(keys.count({1, {{0}}}));
  EXPECT_TRUE(keys.count({1, {{0}, {0}}}));
  EXPECT_TRUE(keys.count({2, {{0, 1}}}));
  EXPECT_TRUE(keys.count({2, {{0, 1}, {0, 1}}}));
  EXPECT_TRUE(keys.count({2, {{0}, {1}}}));
  EXPECT_FALSE(keys.count({2, {{0}, {0}}}));
}

TEST(Patterns, NoIsomorphicDuplicatesAndCompleteUpToThree) {
  for (std::size_t D = 1; D <= 3; ++D) {
    auto pats = enumerate_patterns(D);
    std::set<std::pair<std::size_t, std::vector<VertexSet>>> keys;
    for (const auto& h : pats) keys.insert({h.num_vertices, canonical_key(h)});
    EXPECT_EQ(keys.size(), pats.size()) << "duplicate isomorphism class at D=" << D;
    EXPECT_EQ(keys, pattern_classes_oracle(D)) << "D=" << D;
  }
}

TEST(Patterns, CapsAndErrors) {
  EXPECT_THROW(enumerate_patterns(0), InvalidInput);
  PatternCaps tiny;
  tiny.max_candidates = 10;
  EXPECT_THROW(enumerate_patterns(3, tiny), CapExceeded);
  PatternCaps one_edge;
  one_edge.max_edges = 1;
  for (const auto& h : enumerate_patterns(3, one_edge)) EXPECT_EQ(h.edge_count(), 1u);
  EXPECT_EQ(pattern_edge_cap(3), 3u);
  EXPECT_EQ(pattern_edge_cap(1000), 1000u);
  PatternCaps loose;
  loose.max_edges = 5000;
  EXPECT_EQ(pattern_edge_cap(1000, loose), static_cast<std::size_t>(std::ceil(160 * std::log(1000.0))));
}

TEST(Appearances, CoordinatesFigureSolution) {
  auto inst = coordinates_figure();
  auto host = build_difference_hypergraph(inst.groups[0].points[0], inst, inst.budget).graph;
  auto app = find_appearances(make_hg(1, {{{0}, 2}}), host);
  EXPECT_NE(std::find(app.begin(), app.end(), VertexSet{2}), app.end());
  EXPECT_TRUE(quarter_cover_holds(make_hg(1, {{{0}, 2}})));
}

TEST(Appearances, TrivialCases) {
  Hypergraph host = make_hg(3, {{{0, 1}, 1}});
  EXPECT_EQ(find_appearances(Hypergraph{}, host), std::vector<VertexSet>{VertexSet{}});
  EXPECT_TRUE(find_appearances(make_hg(3, {{{0, 1, 2}, 1}}), host).empty());
}

TEST(Appearances, MatchBruteForceProperty) {
  Gen g(23);
  std::vector<Hypergraph> pats;
  for (std::size_t D = 1; D <= 3; ++D)
    for (auto& h : enumerate_patterns(D)) pats.push_back(h);
  for (int it = 0; it < 120; ++it) {
    Hypergraph host;
    host.num_vertices = static_cast<std::size_t>(g.between(1, 6));
    for (int e = 0, ne = static_cast<int>(g.between(0, 5)); e < ne; ++e) {
      VertexSet s;
      for (std::size_t v = 0; v < host.num_vertices; ++v)
        if (g.coin()) s.push_back(v);
      host.edges.push_back({s, static_cast<Weight>(g.between(1, 2))});
    }
    for (int k = 0; k < 6; ++k) {
      const auto& pat = pats[g.index(pats.size())];
      if (pat.num_vertices > host.num_vertices) continue;
      auto got = find_appearances(pat, host);
      std::set<VertexSet> got_set(got.begin(), got.end());
      EXPECT_EQ(got_set.size(), got.size());
      EXPECT_EQ(got_set, appearances_oracle(pat, host));
    }
  }
}

TEST(CandidateSets, ExhaustiveOnCoordinatesFigure) {
  auto inst = coordinates_figure();
  auto host = build_difference_hypergraph(inst.groups[0].points[0], inst, inst.budget).graph;
  auto sets = candidate_coordinate_sets(host, 2, CoordinateMode::Exhaustive);
  std::set<VertexSet> want{{}};
  VertexSet active{0, 1, 2, 4};
  for (std::size_t i = 0; i < active.size(); ++i) {
    want.insert({active[i]});
    for (std::size_t j = i + 1; j < active.size(); ++j) want.insert({active[i], active[j]});
  }
  EXPECT_EQ(sets, want);
  CoordinateStats st;
  candidate_coordinate_sets(host, 2, CoordinateMode::Auto, {}, &st);
  EXPECT_EQ(st.used, CoordinateMode::Exhaustive);
}

TEST(CandidateSets, PaperModeOnCoordinatesFigure) {
  auto inst = coordinates_figure();
  auto host = build_difference_hypergraph(inst.groups[0].points[0], inst, inst.budget).graph;
  CoordinateStats st;
  auto sets = candidate_coordinate_sets(host, 2, CoordinateMode::Paper, {}, &st);
  EXPECT_TRUE(sets.count({2}));
  EXPECT_TRUE(sets.count({}));
  EXPECT_GT(st.patterns, 0u);
  // Paper mode never proposes more than exhaustive mode.
  auto ex = candidate_coordinate_sets(host, 2, CoordinateMode::Exhaustive);
  for (const auto& s : sets) EXPECT_TRUE(ex.count(s));
}

TEST(CandidateSets, EmptyHost) {
  Hypergraph host;
  host.num_vertices = 4;
  for (auto mode : {CoordinateMode::Paper, CoordinateMode::Exhaustive})
    EXPECT_EQ(candidate_coordinate_sets(host, 3, mode), std::set<VertexSet>{VertexSet{}});
}
