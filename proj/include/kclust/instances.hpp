#pragma once

#include "kclust/core.hpp"

#include <vector>

namespace kclust {

// t disjoint weighted groups; a solution picks one vector per group.
struct SelectionInstance {
  std::size_t dimension = 0;
  std::vector<WeightedCluster> groups;
  CostValue budget;
  DistanceOrder order = DistanceOrder::l1();

  std::size_t num_groups() const { return groups.size(); }
  std::size_t num_vectors() const {
    std::size_t m = 0;
    for (const auto& g : groups) m += g.points.size();
    return m;
  }
  void validate() const {
    if (groups.empty()) throw InvalidInput("selection instance needs at least one group");
    for (const auto& g : groups) {
      if (g.points.empty()) throw InvalidInput("selection groups must be nonempty");
      g.validate();
      if (g.dimension() != dimension) throw InvalidInput("group dimension mismatch");
    }
  }
};

struct SelectionResult {
  bool feasible = false;
  std::vector<std::size_t> chosen;  // index into each group
  Centroid centroid;
  CostValue cost;
};

// k-Clustering: partition the dataset into at most k clusters of total cost <= D.
struct ClusteringInstance {
  Dataset dataset;
  std::size_t k = 1;
  CostValue budget;
  DistanceOrder order = DistanceOrder::l1();

  void validate() const {
    if (k < 1) throw InvalidInput("k must be positive");
    dataset.validate();
  }
};

inline WeightedCluster chosen_cluster(const SelectionInstance& inst, const std::vector<std::size_t>& chosen) {
  WeightedCluster c;
  for (std::size_t i = 0; i < chosen.size(); ++i) c.add(inst.groups[i].points[chosen[i]], inst.groups[i].weights[chosen[i]]);
  return c;
}

}  // namespace kclust
