#pragma once

#include "kclust/centroids.hpp"
#include "kclust/instances.hpp"
#include "kclust/selection.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace kclust {

using ColorPartition = std::vector<std::vector<std::size_t>>;  // disjoint parts, each of size >= 2

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent stream per (seed, index), so iterations do not depend on order.
inline std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x5851F42D4C957F2Dull)));
}

}  // namespace detail

// Every family of pairwise-disjoint subsets of `used` with all parts of size
// >= 2, ordered by the number of colors covered and then lexicographically.
inline std::vector<ColorPartition> enumerate_color_partitions(std::vector<std::size_t> used) {
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<ColorPartition> out;
  ColorPartition cur;
  std::vector<char> taken(used.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    while (i < used.size() && taken[i]) ++i;
    if (i == used.size()) {
      out.push_back(cur);
      return;
    }
    rec(i + 1);  // color i stays out of every part
    // Color i opens a part together with a nonempty subset of later free colors.
    std::vector<std::size_t> free;
    for (std::size_t j = i + 1; j < used.size(); ++j)
      if (!taken[j]) free.push_back(j);
    for (std::uint64_t mask = 1; mask < (1ull << free.size()); ++mask) {
      std::vector<std::size_t> part{used[i]};
      taken[i] = 1;
      for (std::size_t b = 0; b < free.size(); ++b)
        if (mask >> b & 1u) {
          part.push_back(used[free[b]]);
          taken[free[b]] = 1;
        }
      cur.push_back(part);
      rec(i + 1);
      cur.pop_back();
      taken[i] = 0;
      for (std::size_t b = 0; b < free.size(); ++b)
        if (mask >> b & 1u) taken[free[b]] = 0;
    }
  };
  if (used.size() > 20) throw CapExceeded("too many colors to enumerate partitions");
  rec(0);
  for (auto& f : out) std::sort(f.begin(), f.end());
  std::sort(out.begin(), out.end(), [](const ColorPartition& a, const ColorPartition& b) {
    std::size_t sa = 0, sb = 0;
    for (const auto& p : a) sa += p.size();
    for (const auto& p : b) sb += p.size();
    if (sa != sb) return sa < sb;
    return a < b;
  });
  return out;
}

// Number of clusters once each part's colors merge into one cluster.
inline std::size_t cluster_count(std::size_t num_initial, const ColorPartition& part) {
  std::size_t merged = 0;
  for (const auto& p : part) merged += p.size();
  return num_initial - merged + part.size();
}

enum class IterationPolicy { Auto, Explicit, Exhaustive };
enum class SelectionMode { Specialized, Oracle };

struct SolveConfig {
  std::uint64_t seed = 0;
  IterationPolicy policy = IterationPolicy::Auto;
  std::uint64_t iterations = 0;            // Explicit policy
  std::uint64_t max_iterations = 100'000;  // Auto policy cap
  std::uint64_t coloring_cap = 1'000'000;  // Exhaustive policy: canonical colorings
  std::uint64_t max_T = 64;
  SelectionMode selection_mode = SelectionMode::Specialized;
  SelectionConfig selection;
};

struct SolveStats {
  std::uint64_t T = 0;
  std::uint64_t iterations_planned = 0;
  std::uint64_t iterations_run = 0;
  std::uint64_t partitions_tried = 0;
  std::uint64_t selection_calls = 0;
  std::uint64_t cache_hits = 0;
  double confidence = 0;  // probability a yes-instance is detected
  SelectionStats selection;
};

struct SolveResult {
  bool decision = false;
  std::optional<Clustering> clustering;
  SolveStats stats;
};

namespace detail {

inline Clustering simple_clustering(const std::vector<InitialCluster>& ic, const DistanceOrder& order) {
  Clustering c;
  c.total_cost = zero_cost(order);
  for (std::size_t i = 0; i < ic.size(); ++i) {
    c.clusters.push_back(WeightedCluster({ic[i].representative}, {ic[i].size}));
    c.centroids.push_back(centroid_of(ic[i].representative));
    c.costs.push_back(zero_cost(order));
    c.members.push_back({i});
  }
  return c;
}

// Number of set partitions of m items into at most T blocks (saturating).
inline std::uint64_t canonical_coloring_count(std::size_t m, std::size_t T, std::uint64_t limit) {
  // Stirling numbers of the second kind, row by row.
  std::vector<long double> row(T + 1, 0);
  row[0] = 1;
  for (std::size_t i = 1; i <= m; ++i) {
    std::vector<long double> next(T + 1, 0);
    for (std::size_t j = 1; j <= std::min(i, T); ++j) next[j] = static_cast<long double>(j) * row[j] + row[j - 1];
    row = std::move(next);
  }
  long double total = 0;
  for (std::size_t j = 0; j <= T; ++j) total += row[j];
  return total > static_cast<long double>(limit) ? limit + 1 : static_cast<std::uint64_t>(total + 0.5L);
}

}  // namespace detail

// Color-coding algorithm. T = ceil(2D / alpha) bounds the number of initial
// clusters inside composite clusters. Each coloring of the initial clusters
// with T colors is tried with every color partition whose cluster count is k;
// each part becomes a selection instance (one group per color), and its least
// feasible budget in the candidate cost set is found by binary search (the
// selection answer is monotone in the budget). A coloring succeeds when the
// part budgets sum to at most D.
inline SolveResult solve_color_coding(const ClusteringInstance& inst, const SolveConfig& cfg = {}) {
  inst.validate();
  SolveResult res;
  const auto& order = inst.order;
  const Real& tol = cfg.selection.tol;
  std::vector<InitialCluster> ic = regularize(inst.dataset);
  const std::size_t m = ic.size();

  if (inst.k >= m) {
    res.decision = true;
    res.clustering = detail::simple_clustering(ic, order);
    res.stats.confidence = 1;
    return res;
  }

  Rational alpha = alpha_for(order);
  Real t_real = mp::ceil(2 * cost_eval(inst.budget) / to_real(alpha) - tol);
  if (t_real < 0) t_real = 0;
  if (t_real > Real(cfg.max_T)) throw CapExceeded("color count T exceeds cap");
  const std::size_t T = t_real.convert_to<std::size_t>();
  res.stats.T = T;
  // Every composite cluster costs at least alpha; k < m forces one.
  if (T < 2) {
    res.stats.confidence = 1;
    return res;
  }

  CostSet dset = enumerate_cost_set(order, inst.budget, static_cast<std::size_t>(inst.dataset.n()), tol);

  struct PartAnswer {
    bool feasible = false;
    std::size_t index = 0;  // into dset.members
    SelectionResult witness;
  };
  std::map<std::vector<std::vector<std::size_t>>, PartAnswer> cache;

  auto solve_part = [&](const std::vector<std::vector<std::size_t>>& groups) -> const PartAnswer& {
    auto key = groups;
    for (auto& g : key) std::sort(g.begin(), g.end());
    std::sort(key.begin(), key.end());
    if (auto it = cache.find(key); it != cache.end()) {
      ++res.stats.cache_hits;
      return it->second;
    }
    SelectionInstance sel;
    sel.dimension = inst.dataset.dimension;
    sel.order = order;
    for (const auto& g : key) {
      WeightedCluster wc;
      for (auto i : g) wc.add(ic[i].representative, ic[i].size);
      sel.groups.push_back(std::move(wc));
    }
    auto decide = [&](std::size_t idx) {
      sel.budget = dset.members[idx];
      ++res.stats.selection_calls;
      return cfg.selection_mode == SelectionMode::Oracle
                 ? select_bruteforce(sel, cfg.selection, &res.stats.selection)
                 : select_specialized(sel, cfg.selection, &res.stats.selection);
    };
    // Candidates below alpha (t - 1) cannot be optimal cluster costs.
    Real floor_value = to_real(alpha * Rational(static_cast<long>(key.size() - 1)));
    std::size_t lo = 0;
    while (lo < dset.members.size() && dset.members[lo].eval() + tol < floor_value) ++lo;
    PartAnswer ans;
    std::size_t hi = dset.members.size();
    while (lo < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      SelectionResult r = decide(mid);
      if (r.feasible) {
        ans.feasible = true;
        ans.index = mid;
        ans.witness = std::move(r);
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return cache.emplace(std::move(key), std::move(ans)).first->second;
  };

  auto try_coloring = [&](const std::vector<std::size_t>& color) -> bool {
    std::map<std::size_t, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < m; ++i) classes[color[i]].push_back(i);
    std::vector<std::size_t> used;
    for (const auto& [c, _] : classes) used.push_back(c);
    for (const auto& family : enumerate_color_partitions(used)) {
      if (cluster_count(m, family) != inst.k) continue;
      ++res.stats.partitions_tried;
      CostValue sum = zero_cost(order);
      std::vector<const PartAnswer*> answers;
      bool ok = true;
      for (const auto& part : family) {
        std::vector<std::vector<std::size_t>> groups;
        for (auto c : part) groups.push_back(classes[c]);
        const PartAnswer& a = solve_part(groups);
        if (!a.feasible) { ok = false; break; }
        sum += dset.members[a.index];
        if (!cost_le(sum, inst.budget, tol)) { ok = false; break; }
        answers.push_back(&a);
      }
      if (!ok) continue;

      // Assemble: witnesses become composite clusters, everything else simple.
      Clustering cl;
      cl.total_cost = zero_cost(order);
      std::vector<char> in_composite(m, 0);
      for (std::size_t pi = 0; pi < family.size(); ++pi) {
        std::vector<std::vector<std::size_t>> groups;
        for (auto c : family[pi]) groups.push_back(classes[c]);
        for (auto& g : groups) std::sort(g.begin(), g.end());
        std::sort(groups.begin(), groups.end());
        const SelectionResult& w = answers[pi]->witness;
        std::vector<std::size_t> members;
        WeightedCluster wc;
        for (std::size_t g = 0; g < groups.size(); ++g) {
          std::size_t idx = groups[g][w.chosen[g]];
          members.push_back(idx);
          in_composite[idx] = 1;
        }
        std::sort(members.begin(), members.end());
        for (auto idx : members) wc.add(ic[idx].representative, ic[idx].size);
        CentroidResult opt = optimal_centroid(order, wc, cfg.selection.linf, tol);
        cl.total_cost += opt.cost;
        cl.clusters.push_back(std::move(wc));
        cl.centroids.push_back(std::move(opt.centroid));
        cl.costs.push_back(std::move(opt.cost));
        cl.members.push_back(std::move(members));
      }
      for (std::size_t i = 0; i < m; ++i) {
        if (in_composite[i]) continue;
        cl.clusters.push_back(WeightedCluster({ic[i].representative}, {ic[i].size}));
        cl.centroids.push_back(centroid_of(ic[i].representative));
        cl.costs.push_back(zero_cost(order));
        cl.members.push_back({i});
      }
      res.clustering = std::move(cl);
      return true;
    }
    return false;
  };

  if (cfg.policy == IterationPolicy::Exhaustive) {
    std::uint64_t count = detail::canonical_coloring_count(m, T, cfg.coloring_cap);
    if (count > cfg.coloring_cap) throw CapExceeded("canonical coloring count exceeds cap");
    res.stats.iterations_planned = count;
    res.stats.confidence = 1;
    // Restricted growth strings: colorings up to renaming of colors.
    std::vector<std::size_t> color(m, 0);
    std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t blocks) -> bool {
      if (i == m) {
        ++res.stats.iterations_run;
        return try_coloring(color);
      }
      for (std::size_t c = 0; c <= blocks && c < T; ++c) {
        color[i] = c;
        if (rec(i + 1, std::max(blocks, c + 1))) return true;
      }
      return false;
    };
    res.decision = rec(0, 0);
    return res;
  }

  double eT = std::exp(static_cast<double>(T));
  std::uint64_t N = cfg.policy == IterationPolicy::Explicit
                        ? cfg.iterations
                        : static_cast<std::uint64_t>(std::min(std::ceil(eT), static_cast<double>(cfg.max_iterations)));
  res.stats.iterations_planned = N;
  res.stats.confidence = 1 - std::pow(1 - std::exp(-static_cast<double>(T)), static_cast<double>(N));
  std::vector<std::size_t> color(m);
  for (std::uint64_t it = 0; it < N; ++it) {
    auto rng = detail::stream_for(cfg.seed, it);
    std::uniform_int_distribution<std::size_t> pick(0, T - 1);
    for (auto& c : color) c = pick(rng);
    ++res.stats.iterations_run;
    if (try_coloring(color)) {
      res.decision = true;
      return res;
    }
  }
  return res;
}

struct BruteforceConfig {
  std::size_t cap = 10;        // initial clusters
  bool decision_only = false;  // prune at D instead of computing the minimum
  Real tol = kDefaultTol;
  LinfMethod linf = LinfMethod::Pairwise;
  ClusterObserver on_cluster;  // sees every composite cluster whose cost is computed
};

struct BruteforceResult {
  bool decision = false;
  bool min_known = false;  // false only in decision mode with no solution found
  CostValue min_cost;
  std::optional<Clustering> clustering;
  std::uint64_t nodes = 0;
};

// Exhaustive oracle over regular clusterings: every assignment of initial
// clusters to at most k nonempty clusters (restricted growth strings), with
// branch and bound on the running cost. Opening a new cluster is tried before
// joining an existing one so that a good bound is found early.
inline BruteforceResult solve_bruteforce(const ClusteringInstance& inst, const BruteforceConfig& cfg = {}) {
  inst.validate();
  const auto& order = inst.order;
  std::vector<InitialCluster> ic = regularize(inst.dataset);
  const std::size_t m = ic.size();
  if (m > cfg.cap) throw CapExceeded("initial cluster count exceeds brute-force cap");
  BruteforceResult res;
  if (m == 0) {
    res.decision = res.min_known = true;
    res.min_cost = zero_cost(order);
    res.clustering = Clustering{{}, {}, {}, {}, zero_cost(order)};
    return res;
  }

  std::vector<WeightedCluster> blocks;
  std::vector<std::vector<std::size_t>> members;
  std::vector<CentroidResult> cost;
  std::optional<CostValue> best;
  std::vector<std::vector<std::size_t>> best_members;
  std::vector<CentroidResult> best_cost;

  auto total = [&]() {
    CostValue s = zero_cost(order);
    for (const auto& c : cost) s += c.cost;
    return s;
  };
  auto pruned = [&](const CostValue& s) {
    if (cfg.decision_only && !cost_le(s, inst.budget, cfg.tol)) return true;
    return best && cost_le(*best, s, cfg.tol);
  };

  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    ++res.nodes;
    if (i == m) {
      CostValue s = total();
      if (!best || cost_lt(s, *best, cfg.tol)) {
        best = s;
        best_members = members;
        best_cost = cost;
      }
      return;
    }
    if (cfg.decision_only && best) return;
    auto place = [&](std::size_t b) {
      blocks[b].add(ic[i].representative, ic[i].size);
      members[b].push_back(i);
      CentroidResult saved = cost[b];
      cost[b] = optimal_centroid(order, blocks[b], cfg.linf, cfg.tol);
      if (cfg.on_cluster && blocks[b].points.size() >= 2) cfg.on_cluster(blocks[b], cost[b].cost);
      if (!pruned(total())) rec(i + 1);
      cost[b] = std::move(saved);
      members[b].pop_back();
      blocks[b].points.pop_back();
      blocks[b].weights.pop_back();
    };
    if (blocks.size() < inst.k) {
      blocks.emplace_back();
      members.emplace_back();
      cost.push_back(CentroidResult{centroid_of(ic[i].representative), zero_cost(order)});
      place(blocks.size() - 1);
      blocks.pop_back();
      members.pop_back();
      cost.pop_back();
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) place(b);
  };
  rec(0);

  if (!best) return res;  // decision mode, nothing within D
  res.min_known = true;
  res.min_cost = *best;
  res.decision = cost_le(*best, inst.budget, cfg.tol);
  Clustering cl;
  cl.total_cost = *best;
  for (std::size_t b = 0; b < best_members.size(); ++b) {
    WeightedCluster wc;
    for (auto i : best_members[b]) wc.add(ic[i].representative, ic[i].size);
    cl.clusters.push_back(std::move(wc));
    cl.centroids.push_back(best_cost[b].centroid);
    cl.costs.push_back(best_cost[b].cost);
    cl.members.push_back(best_members[b]);
  }
  res.clustering = std::move(cl);
  return res;
}

struct ColoringEstimate {
  double estimate = 0;
  double exact = 0;  // T! / T^T
  double sigma = 0;  // binomial standard error at the exact value
  std::uint64_t trials = 0;
};

// Monte-Carlo frequency of T items receiving T distinct colors out of T.
inline ColoringEstimate coloring_success_estimate(std::size_t T, std::uint64_t trials, std::uint64_t seed) {
  if (T < 1) throw InvalidInput("T must be >= 1");
  if (trials < 1) throw InvalidInput("trials must be >= 1");
  ColoringEstimate e;
  e.trials = trials;
  double exact = 1;
  for (std::size_t i = 1; i <= T; ++i) exact *= static_cast<double>(i) / static_cast<double>(T);
  e.exact = exact;
  e.sigma = std::sqrt(exact * (1 - exact) / static_cast<double>(trials));
  std::uint64_t hits = 0;
  std::vector<char> seen(T);
  for (std::uint64_t it = 0; it < trials; ++it) {
    auto rng = detail::stream_for(seed, it);
    std::uniform_int_distribution<std::size_t> pick(0, T - 1);
    std::fill(seen.begin(), seen.end(), 0);
    bool distinct = true;
    for (std::size_t i = 0; i < T && distinct; ++i) {
      std::size_t c = pick(rng);
      distinct = !seen[c];
      seen[c] = 1;
    }
    hits += distinct;
  }
  e.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  return e;
}

}  // namespace kclust
