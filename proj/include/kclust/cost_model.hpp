#pragma once

#include "kclust/numeric.hpp"
#include "kclust/order.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace kclust {

// Default tolerance for comparing irrational (basis) costs.
inline const Real kDefaultTol = Real("1e-12");

// a^p at 50 digits, memoized per thread.
inline const Real& basis_power(const Int& a, const Rational& p) {
  thread_local std::map<std::pair<Int, Rational>, Real> cache;
  auto key = std::make_pair(a, p);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Real v;
  if (a == 0) v = 0;
  else if (a == 1 || p == 0) v = 1;
  else if (p == 1) v = Real(a);
  else v = mp::pow(Real(a), to_real(p));
  return cache.emplace(std::move(key), std::move(v)).first->second;
}

// Exact structured cost. Exact kinds (Int, Rational, HalfInt) carry their
// value as a rational; Basis carries sum_a coeff_a * a^p.
class CostValue {
 public:
  enum class Kind { Int, Rational, HalfInt, Basis };
  using Terms = std::map<kclust::Int, kclust::Int>;

  CostValue() = default;

  static CostValue integer(const kclust::Int& v) {
    require_nonneg(v);
    return CostValue(Kind::Int, kclust::Rational(v));
  }
  static CostValue rational(const kclust::Rational& v) {
    require_nonneg(v);
    return CostValue(Kind::Rational, v);
  }
  // z / s^2
  static CostValue z_over_s2(const kclust::Int& z, const kclust::Int& s) {
    if (s <= 0) throw InvalidInput("s must be positive");
    return rational(make_rational(z, s * s));
  }
  static CostValue halves(const kclust::Int& count) {
    require_nonneg(count);
    return CostValue(Kind::HalfInt, make_rational(count, 2));
  }
  static CostValue half_integral(const kclust::Rational& v) {
    if (mp::denominator(v * 2) != 1) throw InvalidInput("not a half-integer: " + kclust::to_string(v));
    return halves(mp::numerator(v * 2));
  }
  // sum coeff * base^p. p = 1 collapses to an Int.
  static CostValue basis(const Terms& terms, const kclust::Rational& p) {
    if (p <= 0 || p > 1) throw InvalidInput("basis exponent must be in (0,1]");
    CostValue c(Kind::Basis, kclust::Rational(0));
    c.p_ = p;
    for (const auto& [a, coeff] : terms) {
      if (a < 1 || coeff < 0) throw InvalidInput("basis terms need base >= 1 and coefficient >= 0");
      if (coeff != 0) c.terms_[a] += coeff;
    }
    if (p == 1) {
      kclust::Int total = 0;
      for (const auto& [a, coeff] : c.terms_) total += a * coeff;
      return integer(total);
    }
    return c;
  }

  Kind kind() const { return kind_; }
  bool is_exact() const { return kind_ != Kind::Basis; }
  // Value of an exact kind.
  const kclust::Rational& exact() const {
    if (!is_exact()) throw InvalidInput("basis cost has no exact rational value");
    return value_;
  }
  const Terms& terms() const { return terms_; }
  const kclust::Rational& exponent() const { return p_; }
  bool is_zero() const { return is_exact() ? value_ == 0 : terms_.empty(); }

  Real eval() const {
    if (is_exact()) return to_real(value_);
    Real s = 0;
    for (const auto& [a, coeff] : terms_) s += Real(coeff) * basis_power(a, p_);
    return s;
  }

  CostValue scaled(Weight w) const {
    CostValue c = *this;
    if (is_exact()) {
      c.value_ *= w;
    } else {
      for (auto& [a, coeff] : c.terms_) coeff *= w;
      if (w == 0) c.terms_.clear();
    }
    return c;
  }

  friend CostValue operator+(const CostValue& a, const CostValue& b) {
    if (a.is_exact() && b.is_exact()) {
      Kind k = Kind::Int;
      if (a.kind_ == Kind::Rational || b.kind_ == Kind::Rational) k = Kind::Rational;
      else if (a.kind_ == Kind::HalfInt || b.kind_ == Kind::HalfInt) k = Kind::HalfInt;
      return CostValue(k, a.value_ + b.value_);
    }
    if (!a.is_exact() && !b.is_exact()) {
      if (a.p_ != b.p_) throw InvalidInput("adding basis costs with different exponents");
      CostValue c = a;
      for (const auto& [base, coeff] : b.terms_) c.terms_[base] += coeff;
      return c;
    }
    const CostValue& bas = a.is_exact() ? b : a;
    const CostValue& ex = a.is_exact() ? a : b;
    if (mp::denominator(ex.value_) != 1) throw InvalidInput("cannot add a fractional exact cost to a basis cost");
    CostValue c = bas;
    if (ex.value_ != 0) c.terms_[kclust::Int(1)] += mp::numerator(ex.value_);
    return c;
  }
  CostValue& operator+=(const CostValue& o) { return *this = *this + o; }

  // Structural equality: exact kinds by value, basis by identical maps.
  friend bool operator==(const CostValue& a, const CostValue& b) {
    if (a.is_exact() != b.is_exact()) return false;
    if (a.is_exact()) return a.value_ == b.value_;
    return a.p_ == b.p_ && a.terms_ == b.terms_;
  }

  // Human-readable form; basis values as "basis:c1*a1+c2*a2".
  std::string to_string() const {
    if (is_exact()) return kclust::to_string(value_);
    if (terms_.empty()) return "basis:0";
    std::string s = "basis:";
    bool first = true;
    for (const auto& [a, coeff] : terms_) {
      if (!first) s += "+";
      first = false;
      s += coeff.str() + "*" + a.str();
    }
    return s;
  }

 private:
  CostValue(Kind k, kclust::Rational v) : kind_(k), value_(std::move(v)) {}
  template <class T>
  static void require_nonneg(const T& v) {
    if (v < 0) throw InvalidInput("costs are nonnegative");
  }

  Kind kind_ = Kind::Int;
  kclust::Rational value_ = 0;
  Terms terms_;
  kclust::Rational p_ = 1;
};

inline Real cost_eval(const CostValue& c, unsigned digits = kRealDigits) {
  if (digits < 15) throw InvalidInput("precision must be at least 15 digits");
  if (digits > kRealDigits) throw InvalidInput("precision above 50 digits is not supported");
  return c.eval();
}

// Exact when both sides are exact; otherwise a <= b + tol numerically.
inline bool cost_le(const CostValue& a, const CostValue& b, const Real& tol = kDefaultTol) {
  if (a.is_exact() && b.is_exact()) return a.exact() <= b.exact();
  if (a == b) return true;
  return a.eval() <= b.eval() + tol;
}

// Strictly smaller beyond tolerance (exact when possible).
inline bool cost_lt(const CostValue& a, const CostValue& b, const Real& tol = kDefaultTol) {
  return !cost_le(b, a, tol);
}

// floor(D); basis values are floored after adding tol so that a budget that
// evaluates to an integer up to rounding is not shrunk.
inline Int floor_budget(const CostValue& d, const Real& tol = kDefaultTol) {
  if (d.is_exact()) return floor_of(d.exact());
  return mp::floor(d.eval() + tol).convert_to<Int>();
}

// Parses a budget string under the given order. Accepted forms: integer,
// "a/b", decimal (p in (0,1) or exact halves for inf), "z/s2:<z>/<s>" and
// "basis:c1*a1+c2*a2" (p in (0,1)).
inline CostValue parse_budget(const std::string& s, const DistanceOrder& order) {
  auto fail = [&](const std::string& why) { return InvalidInput("budget '" + s + "': " + why); };
  if (s.rfind("basis:", 0) == 0) {
    if (!order.is_fractional()) throw fail("basis budgets need 0 < p < 1");
    CostValue::Terms terms;
    std::string body = s.substr(6);
    if (body == "0") return CostValue::basis({}, order.p());
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t plus = body.find('+', pos);
      std::string term = body.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
      std::size_t star = term.find('*');
      if (star == std::string::npos) throw fail("basis term must be coeff*base");
      Rational coeff = parse_rational(term.substr(0, star));
      Rational base = parse_rational(term.substr(star + 1));
      if (mp::denominator(coeff) != 1 || mp::denominator(base) != 1) throw fail("basis terms are integers");
      terms[mp::numerator(base)] += mp::numerator(coeff);
      if (plus == std::string::npos) break;
      pos = plus + 1;
    }
    return CostValue::basis(terms, order.p());
  }
  if (s.rfind("z/s2:", 0) == 0) {
    if (order.kind() != DistanceOrder::Kind::P2) throw fail("z/s2 budgets need p = 2");
    std::string body = s.substr(5);
    std::size_t slash = body.find('/');
    if (slash == std::string::npos) throw fail("expected z/s2:<z>/<s>");
    Rational z = parse_rational(body.substr(0, slash));
    Rational sq = parse_rational(body.substr(slash + 1));
    if (mp::denominator(z) != 1 || mp::denominator(sq) != 1) throw fail("z and s are integers");
    return CostValue::z_over_s2(mp::numerator(z), mp::numerator(sq));
  }
  bool decimal = s.find('.') != std::string::npos;
  Rational v = parse_rational(s);
  if (v < 0) throw fail("negative");
  switch (order.kind()) {
    case DistanceOrder::Kind::P01:
      if (order.is_fractional()) {
        if (mp::denominator(v) == 1) return CostValue::integer(mp::numerator(v));
        return CostValue::rational(v);
      }
      [[fallthrough]];
    case DistanceOrder::Kind::P0:
      if (mp::denominator(v) != 1 || decimal) throw fail("integer budget required");
      return CostValue::integer(mp::numerator(v));
    case DistanceOrder::Kind::P2:
      if (decimal) throw fail("use z/s2:<z>/<s> or a/b for p = 2");
      return CostValue::rational(v);
    case DistanceOrder::Kind::PInf:
      return CostValue::half_integral(v);
  }
  throw fail("unknown order");
}

// Canonical budget string for files: round-trips through parse_budget.
inline std::string format_budget(const CostValue& d, const DistanceOrder& order) {
  if (!d.is_exact()) return d.to_string();
  const Rational& v = d.exact();
  if (order.kind() == DistanceOrder::Kind::P2) {
    Int den = mp::denominator(v);
    Int s = mp::sqrt(den);
    if (s * s != den) s = den;  // v = (num*den)/den^2
    Int z = mp::numerator(v) * (s * s / den);
    return "z/s2:" + z.str() + "/" + s.str();
  }
  return kclust::to_string(v);
}

// Sorted, deduplicated candidate optimal cluster costs that are at most D.
struct CostSet {
  DistanceOrder order = DistanceOrder::l1();
  CostValue budget;
  std::vector<CostValue> members;
  // Number of basis combinations considered before filtering (p in (0,1)).
  Int combinations_before_filter = 0;
  std::size_t basis_size = 0;
};

inline CostSet enumerate_cost_set(const DistanceOrder& order, const CostValue& d, std::size_t n,
                                  const Real& tol = kDefaultTol) {
  CostSet out;
  out.order = order;
  out.budget = d;
  auto exact_budget = [&]() -> const Rational& {
    if (!d.is_exact()) throw InvalidInput("this order needs an exact budget");
    return d.exact();
  };
  switch (order.kind()) {
    case DistanceOrder::Kind::P0:
    case DistanceOrder::Kind::P01:
      if (!order.is_fractional()) {
        Int top = floor_of(exact_budget());
        for (Int v = 0; v <= top; ++v) out.members.push_back(CostValue::integer(v));
        return out;
      } else {
        const Rational& p = order.p();
        Int max_base, max_terms;
        if (d.is_exact()) {
          max_base = ceil_root(d.exact(), p);
          max_terms = floor_of(d.exact());
        } else {
          Real root = mp::pow(d.eval(), 1 / to_real(p));
          max_base = mp::ceil(root - tol).convert_to<Int>();
          max_terms = floor_budget(d, tol);
        }
        std::vector<Int> bases;
        for (Int a = 1; a <= max_base; ++a) bases.push_back(a);
        out.basis_size = bases.size();
        // Multisets of size <= max_terms over |bases| kinds: C(|B| + D, D).
        {
          Int c = 1;
          Int nb = Int(bases.size());
          for (Int i = 1; i <= max_terms; ++i) c = c * (nb + i) / i;
          out.combinations_before_filter = c;
        }
        Real limit = d.eval() + tol;
        CostValue::Terms terms;
        std::vector<CostValue> found;
        // Depth-first over nondecreasing bases; partial sums only grow.
        std::function<void(std::size_t, Int, Real)> rec = [&](std::size_t from, Int used, Real sum) {
          found.push_back(CostValue::basis(terms, p));
          if (used == max_terms) return;
          for (std::size_t i = from; i < bases.size(); ++i) {
            Real next = sum + basis_power(bases[i], p);
            if (next > limit) break;  // bases ascending
            terms[bases[i]] += 1;
            rec(i, used + 1, next);
            if (--terms[bases[i]] == 0) terms.erase(bases[i]);
          }
        };
        rec(0, 0, Real(0));
        std::vector<std::pair<Real, CostValue>> keyed;
        keyed.reserve(found.size());
        for (auto& c : found) keyed.emplace_back(c.eval(), std::move(c));
        std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
          if (x.first != y.first) return x.first < y.first;
          return x.second.terms() < y.second.terms();
        });
        for (auto& [v, c] : keyed) {
          if (!out.members.empty() && out.members.back() == c) continue;
          out.members.push_back(std::move(c));
        }
        return out;
      }
    case DistanceOrder::Kind::P2: {
      if (n < 1) throw InvalidInput("p = 2 cost set needs n >= 1");
      const Rational& dv = exact_budget();
      std::set<Rational> vals;
      for (std::size_t s = 1; s <= n; ++s) {
        Int s2 = Int(s) * Int(s);
        Int top = floor_of(dv * s2);
        for (Int z = 0; z <= top; ++z) vals.insert(make_rational(z, s2));
      }
      for (const auto& v : vals) out.members.push_back(CostValue::rational(v));
      return out;
    }
    case DistanceOrder::Kind::PInf: {
      Int top = floor_of(exact_budget() * 2);
      for (Int h = 0; h <= top; ++h) out.members.push_back(CostValue::halves(h));
      return out;
    }
  }
  return out;
}

}  // namespace kclust
