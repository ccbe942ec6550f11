#pragma once

#include "kclust/numeric.hpp"

#include <string>
#include <string_view>

namespace kclust {

// Which dist_p is active: p in (0,1] (rational), p = 2, p = infinity or p = 0.
class DistanceOrder {
 public:
  enum class Kind { P01, P2, PInf, P0 };

  static DistanceOrder lp(const Rational& p) {
    if (p <= 0 || p > 1) throw InvalidInput("p must satisfy 0 < p <= 1, got " + kclust::to_string(p));
    return DistanceOrder(Kind::P01, p);
  }
  static DistanceOrder l1() { return DistanceOrder(Kind::P01, Rational(1)); }
  static DistanceOrder l2() { return DistanceOrder(Kind::P2, Rational(2)); }
  static DistanceOrder linf() { return DistanceOrder(Kind::PInf, Rational(0)); }
  static DistanceOrder l0() { return DistanceOrder(Kind::P0, Rational(0)); }

  // Accepts "0", "1", "2", "inf" or a rational "a/b" (or decimal) in (0,1].
  static DistanceOrder parse(std::string_view s) {
    if (s == "inf" || s == "infinity") return linf();
    if (s == "0") return l0();
    if (s == "2") return l2();
    return lp(parse_rational(s));
  }

  Kind kind() const { return kind_; }
  // Exponent for P01 (and 2 for P2); meaningless otherwise.
  const Rational& p() const { return p_; }
  bool is_l1() const { return kind_ == Kind::P01 && p_ == 1; }
  bool is_fractional() const { return kind_ == Kind::P01 && p_ < 1; }

  std::string to_string() const {
    switch (kind_) {
      case Kind::P01: return kclust::to_string(p_);
      case Kind::P2: return "2";
      case Kind::PInf: return "inf";
      case Kind::P0: return "0";
    }
    return "?";
  }

  friend bool operator==(const DistanceOrder& a, const DistanceOrder& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_;
  }

 private:
  DistanceOrder(Kind k, Rational p) : kind_(k), p_(std::move(p)) {}
  Kind kind_;
  Rational p_;
};

}  // namespace kclust
