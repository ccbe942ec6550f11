#pragma once

#include "kclust/assignment.hpp"
#include "kclust/core.hpp"
#include "kclust/simplex.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace kclust {

struct CentroidResult {
  Centroid centroid;
  CostValue cost;
};

namespace detail {

// (value, weight) pairs of one coordinate, sorted by value, equal values merged.
inline std::vector<std::pair<Int, Weight>> column(const WeightedCluster& c, std::size_t j) {
  std::map<Int, Weight> m;
  for (std::size_t i = 0; i < c.points.size(); ++i) m[c.points[i][j]] += c.weights[i];
  return {m.begin(), m.end()};
}

inline CostValue::Terms column_terms(const std::vector<std::pair<Int, Weight>>& col, const Int& v) {
  CostValue::Terms t;
  for (const auto& [x, w] : col) {
    Int g = mp::abs(x - v);
    if (g != 0) t[g] += w;
  }
  return t;
}

}  // namespace detail

// Weighted median per coordinate (lowest on ties); exact integer cost.
inline CentroidResult centroid_l1(const WeightedCluster& c) {
  c.validate();
  const Weight total = c.total_weight();
  CentroidResult r;
  Int cost = 0;
  for (std::size_t j = 0; j < c.dimension(); ++j) {
    auto col = detail::column(c, j);
    Weight cum = 0;
    Int med = col.back().first;
    for (const auto& [x, w] : col) {
      cum += w;
      if (2 * cum >= total) {
        med = x;
        break;
      }
    }
    for (const auto& [x, w] : col) cost += mp::abs(x - med) * w;
    r.centroid.coords.emplace_back(med);
  }
  r.cost = CostValue::integer(cost);
  return r;
}

// Best present value per coordinate under sum w|x - v|^p, 0 < p < 1.
inline CentroidResult centroid_lp01(const WeightedCluster& c, const Rational& p, const Real& tol = kDefaultTol) {
  c.validate();
  if (p <= 0 || p >= 1) throw InvalidInput("centroid_lp01 needs 0 < p < 1");
  CentroidResult r;
  CostValue::Terms all;
  for (std::size_t j = 0; j < c.dimension(); ++j) {
    auto col = detail::column(c, j);
    std::size_t best = 0;
    CostValue best_cost;
    for (std::size_t k = 0; k < col.size(); ++k) {
      CostValue cost = CostValue::basis(detail::column_terms(col, col[k].first), p);
      if (k == 0 || cost_lt(cost, best_cost, tol)) {
        best = k;
        best_cost = cost;
      }
    }
    for (const auto& [a, coeff] : best_cost.terms()) all[a] += coeff;
    r.centroid.coords.emplace_back(col[best].first);
  }
  r.cost = CostValue::basis(all, p);
  return r;
}

// Weighted mean (denominator W) and exact rational cost.
inline CentroidResult centroid_l2(const WeightedCluster& c) {
  c.validate();
  const Int W = Int(c.total_weight());
  CentroidResult r;
  Int scaled_cost = 0;  // W^2 * cost
  for (std::size_t j = 0; j < c.dimension(); ++j) {
    Int s = 0;
    for (std::size_t i = 0; i < c.points.size(); ++i) s += c.points[i][j] * c.weights[i];
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      Int g = c.points[i][j] * W - s;
      scaled_cost += g * g * c.weights[i];
    }
    r.centroid.coords.push_back(make_rational(s, W));
  }
  r.cost = CostValue::rational(make_rational(scaled_cost, W * W));
  return r;
}

// Weighted mode per coordinate (lowest on ties).
inline CentroidResult centroid_l0(const WeightedCluster& c) {
  c.validate();
  const Weight total = c.total_weight();
  CentroidResult r;
  Int cost = 0;
  for (std::size_t j = 0; j < c.dimension(); ++j) {
    auto col = detail::column(c, j);
    std::size_t best = 0;
    for (std::size_t k = 1; k < col.size(); ++k)
      if (col[k].second > col[best].second) best = k;
    cost += total - col[best].second;
    r.centroid.coords.emplace_back(col[best].first);
  }
  r.cost = CostValue::integer(cost);
  return r;
}

// min sum w_i d_i  s.t.  -d_i <= x_i[j] - c_j <= d_i, by exact simplex.
// Centroid coordinates are shifted into the bounding box (c_j = lo_j + e_j,
// e_j >= 0) so all variables are nonnegative.
inline CentroidResult centroid_linf_lp(const WeightedCluster& c) {
  c.validate();
  const std::size_t d = c.dimension(), n = c.points.size();
  std::vector<Int> lo(d);
  for (std::size_t j = 0; j < d; ++j) {
    lo[j] = c.points[0][j];
    for (const auto& x : c.points) lo[j] = std::min(lo[j], x[j]);
  }
  // variables: e_0..e_{d-1}, d_0..d_{n-1}
  const std::size_t nv = d + n;
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  A.reserve(2 * n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<Rational> row(nv, Rational(0));
      // x - lo - e <= d   ->   -e - d <= lo - x
      row[j] = -1;
      row[d + i] = -1;
      A.push_back(row);
      b.emplace_back(lo[j] - c.points[i][j]);
      // lo + e - x <= d   ->   e - d <= x - lo
      row[j] = 1;
      A.push_back(std::move(row));
      b.emplace_back(c.points[i][j] - lo[j]);
    }
  }
  std::vector<Rational> obj(nv, Rational(0));
  for (std::size_t i = 0; i < n; ++i) obj[d + i] = -Rational(c.weights[i]);
  ExactSimplex lp(A, b, obj);
  std::vector<Rational> x;
  Rational value;
  if (lp.solve(x, value) != ExactSimplex::Status::Optimal) throw Error("L-infinity centroid LP not optimal");
  CentroidResult r;
  for (std::size_t j = 0; j < d; ++j) r.centroid.coords.push_back(Rational(lo[j]) + x[j]);
  // Re-evaluate at the returned centroid so cost and centroid agree exactly.
  r.cost = cluster_cost_at(DistanceOrder::linf(), c, r.centroid);
  if (r.cost.exact() != -value) throw Error("L-infinity LP value disagrees with its centroid");
  return r;
}

// Exhaustive half-integral grid over the bounding box; first minimum in
// lexicographic order.
inline CentroidResult centroid_linf_grid(const WeightedCluster& c, std::uint64_t cap = 10'000'000) {
  c.validate();
  const std::size_t d = c.dimension();
  std::vector<Int> lo2(d), hi2(d);
  Int size = 1;
  for (std::size_t j = 0; j < d; ++j) {
    Int lo = c.points[0][j], hi = lo;
    for (const auto& x : c.points) {
      lo = std::min(lo, x[j]);
      hi = std::max(hi, x[j]);
    }
    lo2[j] = 2 * lo;
    hi2[j] = 2 * hi;
    size *= hi2[j] - lo2[j] + 1;
    if (size > cap) throw CapExceeded("half-integral grid exceeds cap");
  }
  std::vector<std::vector<Int>> doubled(c.points.size(), std::vector<Int>(d));
  for (std::size_t i = 0; i < c.points.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) doubled[i][j] = 2 * c.points[i][j];
  std::vector<Int> cur = lo2, best;
  Int best_cost = -1;
  for (;;) {
    Int cost = 0;  // in halves
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      Int m = 0;
      for (std::size_t j = 0; j < d; ++j) m = std::max(m, Int(mp::abs(doubled[i][j] - cur[j])));
      cost += m * c.weights[i];
      if (best_cost >= 0 && cost >= best_cost) break;
    }
    if (best_cost < 0 || cost < best_cost) {
      best_cost = cost;
      best = cur;
    }
    bool advanced = false;
    for (std::size_t j = d; j-- > 0;) {
      if (cur[j] < hi2[j]) {
        ++cur[j];
        advanced = true;
        break;
      }
      cur[j] = lo2[j];
    }
    if (!advanced) break;
  }
  CentroidResult r;
  for (std::size_t j = 0; j < d; ++j) r.centroid.coords.push_back(make_rational(best[j], 2));
  r.cost = CostValue::halves(best_cost);
  return r;
}

// L-infinity optimum through pairwise distances: the minimum of sum w_v r_v
// subject to r_u + r_v >= |x_u - x_v|_inf over all pairs equals the cluster
// cost (intervals on a line intersect iff they pairwise intersect). Its
// double-cover relaxation is an assignment problem, whose potentials yield a
// half-integral r and then a centroid c_j = max_v (x_v[j] - r_v).
inline CentroidResult centroid_linf_pairwise(const WeightedCluster& c) {
  c.validate();
  const std::size_t d = c.dimension();
  std::vector<std::size_t> owner;  // unit copy -> point index
  for (std::size_t i = 0; i < c.points.size(); ++i)
    for (Weight k = 0; k < c.weights[i]; ++k) owner.push_back(i);
  const std::size_t m = owner.size();
  if (m > 2000) throw CapExceeded("cluster weight too large for the assignment route");
  std::vector<std::vector<Int>> dist(c.points.size(), std::vector<Int>(c.points.size(), Int(0)));
  Int maxd = 0;
  for (std::size_t a = 0; a < c.points.size(); ++a)
    for (std::size_t b = a + 1; b < c.points.size(); ++b) {
      Int g = 0;
      for (std::size_t j = 0; j < d; ++j) g = std::max(g, Int(mp::abs(c.points[a][j] - c.points[b][j])));
      dist[a][b] = dist[b][a] = g;
      maxd = std::max(maxd, g);
    }
  std::vector<Int> r2(c.points.size());  // 2 * r per point (minimum over copies)
  const bool small = maxd * Int(m + 1) < Int(std::numeric_limits<long long>::max() / 4);
  auto finish = [&](const auto& u, const auto& v) {
    for (std::size_t i = 0; i < c.points.size(); ++i) r2[i] = -1;
    for (std::size_t a = 0; a < m; ++a) {
      Int val = -(Int(u[a]) + Int(v[a]));  // a_a + b_a = 2 r_a
      std::size_t i = owner[a];
      if (r2[i] < 0 || val < r2[i]) r2[i] = val;
    }
  };
  if (small) {
    std::vector<std::vector<long long>> cost(m, std::vector<long long>(m));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) cost[a][b] = -dist[owner[a]][owner[b]].convert_to<long long>();
    auto as = min_cost_assignment<long long>(cost, std::numeric_limits<long long>::max() / 4);
    finish(as.u, as.v);
  } else {
    std::vector<std::vector<Int>> cost(m, std::vector<Int>(m));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) cost[a][b] = -dist[owner[a]][owner[b]];
    auto as = min_cost_assignment<Int>(cost, Int(maxd + 1) * Int(4 * (m + 1)) * Int(m + 1));
    finish(as.u, as.v);
  }
  CentroidResult r;
  for (std::size_t j = 0; j < d; ++j) {
    Int best2 = 2 * c.points[0][j] - r2[0];
    for (std::size_t i = 1; i < c.points.size(); ++i) best2 = std::max(best2, Int(2 * c.points[i][j] - r2[i]));
    r.centroid.coords.push_back(make_rational(best2, 2));
  }
  r.cost = cluster_cost_at(DistanceOrder::linf(), c, r.centroid);
  return r;
}

// Closed-form optimum of a coordinate where a vectors hold 0 and b hold 1
// under |.|^p, p > 1: centroid b^q / (a^q + b^q) with q = 1/(p-1),
// contribution a b / (a^q + b^q)^(p-1).
struct BinaryCoordinateCost {
  Real centroid;
  Real contribution;
};

inline BinaryCoordinateCost binary_coordinate_cost(const Int& a, const Int& b, const Rational& p) {
  if (a < 0 || b < 0 || a + b < 1) throw InvalidInput("binary_coordinate_cost needs a, b >= 0 and a + b >= 1");
  if (p <= 1) throw InvalidInput("binary_coordinate_cost needs p > 1");
  const Real q = 1 / to_real(p - 1);
  auto pw = [&](const Int& x) { return x == 0 ? Real(0) : mp::pow(Real(x), q); };
  const Real A = pw(a), B = pw(b), S = A + B;
  BinaryCoordinateCost r;
  r.centroid = B / S;
  r.contribution = Real(a) * Real(b) / mp::pow(S, to_real(p - 1));
  return r;
}

enum class LinfMethod { Pairwise, Lp, Grid };

// Optimal centroid and exact cost under the given order.
inline CentroidResult optimal_centroid(const DistanceOrder& order, const WeightedCluster& c,
                                       LinfMethod linf = LinfMethod::Pairwise, const Real& tol = kDefaultTol) {
  switch (order.kind()) {
    case DistanceOrder::Kind::P01:
      return order.is_l1() ? centroid_l1(c) : centroid_lp01(c, order.p(), tol);
    case DistanceOrder::Kind::P2: return centroid_l2(c);
    case DistanceOrder::Kind::P0: return centroid_l0(c);
    case DistanceOrder::Kind::PInf:
      switch (linf) {
        case LinfMethod::Pairwise: return centroid_linf_pairwise(c);
        case LinfMethod::Lp: return centroid_linf_lp(c);
        case LinfMethod::Grid: return centroid_linf_grid(c);
      }
  }
  throw InvalidInput("unknown order");
}

}  // namespace kclust
