#pragma once

#include "kclust/cost_model.hpp"
#include "kclust/numeric.hpp"
#include "kclust/order.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace kclust {

using Point = std::vector<Int>;

inline std::string to_string(const Point& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += x[i].str();
  }
  return s + ")";
}

// A weighted multiset of integer vectors: distinct-or-repeated points with
// multiplicities (defaulting to 1).
struct Dataset {
  std::size_t dimension = 0;
  std::vector<Point> points;
  std::vector<Weight> multiplicities;

  Dataset() = default;
  Dataset(std::size_t d, std::vector<Point> pts, std::vector<Weight> mult = {})
      : dimension(d), points(std::move(pts)), multiplicities(std::move(mult)) {
    if (multiplicities.empty()) multiplicities.assign(points.size(), 1);
    validate();
  }

  void validate() const {
    if (multiplicities.size() != points.size()) throw InvalidInput("one multiplicity per point required");
    for (const auto& p : points)
      if (p.size() != dimension) throw InvalidInput("point dimension mismatch");
    for (Weight m : multiplicities)
      if (m < 1) throw InvalidInput("multiplicities must be >= 1");
  }

  Weight n() const { return std::accumulate(multiplicities.begin(), multiplicities.end(), Weight{0}); }
};

struct InitialCluster {
  Point representative;
  Weight size = 0;
};

// Decomposes the multiset into maximal groups of equal vectors, ordered
// lexicographically by representative.
inline std::vector<InitialCluster> regularize(const Dataset& ds) {
  std::map<Point, Weight> groups;
  for (std::size_t i = 0; i < ds.points.size(); ++i) groups[ds.points[i]] += ds.multiplicities[i];
  std::vector<InitialCluster> out;
  out.reserve(groups.size());
  for (auto& [p, w] : groups) out.push_back({p, w});
  return out;
}

inline Rational alpha_for(const DistanceOrder& order) {
  switch (order.kind()) {
    case DistanceOrder::Kind::P01:
    case DistanceOrder::Kind::P0: return Rational(1);
    case DistanceOrder::Kind::PInf: return Rational(1, 2);
    case DistanceOrder::Kind::P2: return Rational(1, 4);
  }
  return Rational(1);
}

struct WeightedCluster {
  std::vector<Point> points;
  std::vector<Weight> weights;

  WeightedCluster() = default;
  WeightedCluster(std::vector<Point> pts, std::vector<Weight> w = {}) : points(std::move(pts)), weights(std::move(w)) {
    if (weights.empty()) weights.assign(points.size(), 1);
  }

  std::size_t dimension() const { return points.empty() ? 0 : points.front().size(); }
  Weight total_weight() const { return std::accumulate(weights.begin(), weights.end(), Weight{0}); }
  void add(const Point& p, Weight w) {
    points.push_back(p);
    weights.push_back(w);
  }
  void validate() const {
    if (points.empty()) throw InvalidInput("cluster must be nonempty");
    if (weights.size() != points.size()) throw InvalidInput("one weight per point required");
    for (const auto& p : points)
      if (p.size() != points.front().size()) throw InvalidInput("cluster dimension mismatch");
    for (Weight w : weights)
      if (w < 1) throw InvalidInput("weights must be >= 1");
  }
};

// Exact centroid. Regimes keep integral (p <= 1, p = 0), half-integral (inf)
// or denominator-W (p = 2) coordinates.
struct Centroid {
  std::vector<Rational> coords;

  bool is_integral() const {
    return std::all_of(coords.begin(), coords.end(), [](const Rational& c) { return mp::denominator(c) == 1; });
  }
  friend bool operator==(const Centroid&, const Centroid&) = default;
};

inline Centroid centroid_of(const Point& p) {
  Centroid c;
  c.coords.assign(p.begin(), p.end());
  return c;
}

inline std::string to_string(const Centroid& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.coords.size(); ++i) {
    if (i) s += ",";
    s += to_string(c.coords[i]);
  }
  return s + ")";
}

// Centroid with a common denominator: c[i] = num[i] / den. Used in hot loops.
struct ScaledCentroid {
  std::vector<Int> num;
  Int den = 1;

  static ScaledCentroid from(const Centroid& c) {
    ScaledCentroid s;
    Int l = 1;
    for (const auto& q : c.coords) l = mp::lcm(l, Int(mp::denominator(q)));
    s.den = l;
    s.num.reserve(c.coords.size());
    for (const auto& q : c.coords) s.num.push_back(mp::numerator(q) * (l / mp::denominator(q)));
    return s;
  }
  Centroid to_centroid() const {
    Centroid c;
    c.coords.reserve(num.size());
    for (const auto& v : num) c.coords.push_back(make_rational(v, den));
    return c;
  }
};

// dist_p between a point and a scaled centroid.
inline CostValue dist_scaled(const DistanceOrder& order, const Point& x, const ScaledCentroid& c) {
  if (x.size() != c.num.size()) throw InvalidInput("dimension mismatch");
  const Int& q = c.den;
  switch (order.kind()) {
    case DistanceOrder::Kind::P0: {
      Int cnt = 0;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] * q != c.num[i]) ++cnt;
      return CostValue::integer(cnt);
    }
    case DistanceOrder::Kind::PInf: {
      Int m = 0;
      for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, Int(mp::abs(x[i] * q - c.num[i])));
      Rational v = make_rational(m, q);
      if (mp::denominator(v * 2) == 1) return CostValue::half_integral(v);
      return CostValue::rational(v);
    }
    case DistanceOrder::Kind::P2: {
      Int s = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        Int g = x[i] * q - c.num[i];
        s += g * g;
      }
      return CostValue::rational(make_rational(s, q * q));
    }
    case DistanceOrder::Kind::P01: {
      if (order.is_l1()) {
        Int s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += mp::abs(x[i] * q - c.num[i]);
        Rational v = make_rational(s, q);
        if (mp::denominator(v) == 1) return CostValue::integer(mp::numerator(v));
        return CostValue::rational(v);
      }
      if (q != 1) throw InvalidInput("p < 1 distances need an integral centroid");
      CostValue::Terms terms;
      for (std::size_t i = 0; i < x.size(); ++i) {
        Int g = mp::abs(x[i] - c.num[i]);
        if (g != 0) terms[g] += 1;
      }
      return CostValue::basis(terms, order.p());
    }
  }
  throw InvalidInput("unknown order");
}

inline CostValue dist(const DistanceOrder& order, const Point& x, const Point& y) {
  if (x.size() != y.size()) throw InvalidInput("dimension mismatch");
  ScaledCentroid s;
  s.num = y;
  return dist_scaled(order, x, s);
}

inline CostValue dist(const DistanceOrder& order, const Point& x, const Centroid& c) {
  if (x.size() != c.coords.size()) throw InvalidInput("dimension mismatch");
  return dist_scaled(order, x, ScaledCentroid::from(c));
}

inline CostValue dist(const DistanceOrder& order, const Centroid& c, const Point& x) { return dist(order, x, c); }

// Zero of the order's natural cost kind.
inline CostValue zero_cost(const DistanceOrder& order) {
  switch (order.kind()) {
    case DistanceOrder::Kind::P2: return CostValue::rational(0);
    case DistanceOrder::Kind::PInf: return CostValue::halves(0);
    case DistanceOrder::Kind::P01:
      if (order.is_fractional()) return CostValue::basis({}, order.p());
      [[fallthrough]];
    default: return CostValue::integer(0);
  }
}

// Weighted cost of a cluster around a given centroid.
inline CostValue cluster_cost_at(const DistanceOrder& order, const WeightedCluster& c, const Centroid& centroid) {
  ScaledCentroid s = ScaledCentroid::from(centroid);
  CostValue total = zero_cost(order);
  for (std::size_t i = 0; i < c.points.size(); ++i) total += dist_scaled(order, c.points[i], s).scaled(c.weights[i]);
  return total;
}

// A partition of the dataset into clusters with centroids and costs.
// members[i] lists indices into regularize(dataset) forming cluster i.
struct Clustering {
  std::vector<WeightedCluster> clusters;
  std::vector<Centroid> centroids;
  std::vector<CostValue> costs;
  std::vector<std::vector<std::size_t>> members;
  CostValue total_cost;
};

}  // namespace kclust
