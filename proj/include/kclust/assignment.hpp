#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace kclust {

// Square assignment problem solved by the Hungarian method with potentials.
// After solve(), u[i] + v[j] <= cost[i][j] for all i, j, with equality on the
// matched pairs; Σu + Σv equals the minimum total cost.
template <class T>
struct Assignment {
  std::vector<T> u, v;               // row / column potentials
  std::vector<std::size_t> row_of;   // row matched to each column
  std::vector<std::size_t> col_of;   // column matched to each row
  T cost{};
};

// `big` must exceed any reachable reduced-cost sum.
template <class T>
Assignment<T> min_cost_assignment(const std::vector<std::vector<T>>& cost, const T& big) {
  const std::size_t n = cost.size();
  // 1-indexed arrays; column 0 is a sentinel.
  std::vector<T> u(n + 1, T(0)), v(n + 1, T(0)), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), big);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      std::size_t i0 = p[j0], j1 = 0;
      T delta = big;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        T cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  Assignment<T> out;
  out.u.assign(u.begin() + 1, u.end());
  out.v.assign(v.begin() + 1, v.end());
  out.row_of.assign(n, 0);
  out.col_of.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    out.row_of[j - 1] = p[j] - 1;
    out.col_of[p[j] - 1] = j - 1;
  }
  out.cost = T(0);
  for (std::size_t i = 0; i < n; ++i) out.cost += cost[i][out.col_of[i]];
  return out;
}

}  // namespace kclust
