#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kclust {

namespace mp = boost::multiprecision;

// Expression templates off: values are plain, `auto` is safe.
using Int = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;
// Numeric evaluation type for irrational (basis) costs: 50 significant digits.
using Real = mp::cpp_bin_float_50;
using Weight = std::uint64_t;

inline constexpr unsigned kRealDigits = 50;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or precondition-violating input.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed a configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

inline Rational make_rational(const Int& num, const Int& den) {
  if (den == 0) throw InvalidInput("zero denominator");
  return Rational(num, den);
}

inline Int floor_of(const Rational& q) {
  Int n = mp::numerator(q), d = mp::denominator(q);
  Int r = n / d;  // truncates toward zero
  if (n < 0 && r * d != n) --r;
  return r;
}

inline Int ceil_of(const Rational& q) {
  Int n = mp::numerator(q), d = mp::denominator(q);
  Int r = n / d;
  if (n > 0 && r * d != n) ++r;
  return r;
}

inline Real to_real(const Int& x) { return Real(x); }

inline Real to_real(const Rational& q) {
  return Real(mp::numerator(q)) / Real(mp::denominator(q));
}

inline Int ipow(const Int& base, unsigned long e) { return mp::pow(base, static_cast<unsigned>(e)); }

inline unsigned long to_exponent(const Int& e) {
  if (e < 0 || e > 1000000) throw InvalidInput("exponent out of range");
  return e.convert_to<unsigned long>();
}

// Largest integer r >= 0 with r <= x^(1/p) for x >= 0 and rational p = a/b > 0,
// i.e. r^a <= x^b. Exact.
inline Int floor_root(const Rational& x, const Rational& p) {
  if (x < 0) throw InvalidInput("negative radicand");
  if (p <= 0) throw InvalidInput("non-positive exponent");
  unsigned long a = to_exponent(mp::numerator(p));
  unsigned long b = to_exponent(mp::denominator(p));
  Int u = mp::numerator(x), v = mp::denominator(x);
  Int ub = ipow(u, b), vb = ipow(v, b);
  auto fits = [&](const Int& r) { return ipow(r, a) * vb <= ub; };
  Int lo = 0, hi = 1;
  while (fits(hi)) hi *= 2;
  while (hi - lo > 1) {
    Int mid = (lo + hi) / 2;
    if (fits(mid)) lo = mid; else hi = mid;
  }
  return lo;
}

// Smallest integer r >= 0 with r >= x^(1/p).
inline Int ceil_root(const Rational& x, const Rational& p) {
  Int r = floor_root(x, p);
  unsigned long a = to_exponent(mp::numerator(p));
  unsigned long b = to_exponent(mp::denominator(p));
  if (ipow(r, a) * ipow(mp::denominator(x), b) == ipow(mp::numerator(x), b)) return r;
  return r + 1;
}

// Parses "12", "-3", "a/b" or a finite decimal "2.25" into an exact rational.
inline Rational parse_rational(std::string_view s) {
  auto bad = [&]() { return InvalidInput("not a number: '" + std::string(s) + "'"); };
  auto parse_int = [&](std::string_view t) {
    if (t.empty()) throw bad();
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw bad();
    for (std::size_t j = i; j < t.size(); ++j)
      if (t[j] < '0' || t[j] > '9') throw bad();
    return Int(std::string(t[0] == '+' ? t.substr(1) : t));
  };
  if (auto slash = s.find('/'); slash != std::string_view::npos)
    return make_rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot), frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (frac.empty()) throw bad();
    std::string digits = std::string(whole.empty() || whole == "-" || whole == "+" ? "0" : whole);
    Int w = parse_int(digits);
    Int f = parse_int(frac);
    Int scale = ipow(Int(10), frac.size());
    Rational r(mp::abs(w) * scale + f, scale);
    return neg ? -r : r;
  }
  return Rational(parse_int(s));
}

inline std::string to_string(const Rational& q) {
  if (mp::denominator(q) == 1) return mp::numerator(q).str();
  return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

}  // namespace kclust
