#pragma once

#include <string>

#include "errors.hpp"
#include "rational.hpp"

namespace twistcalc::logcalc {

using exactalg::Rat;
using exactalg::rat;

/// Exponent alpha + m with alpha in [0,1) and m integral: the unique
/// coset/offset split of a rational exponent.
struct Exponent {
  Rat coset;   // in [0,1)
  long offset = 0;

  Exponent() : coset(0) {}
  Exponent(Rat c, long m) : coset(std::move(c)), offset(m) {
    if (coset < 0 || coset >= 1)
      throw TwistError("InvalidExponent", "coset outside [0,1): " + exactalg::rat_str(coset));
  }

  static Exponent from_value(const Rat& r) {
    long fl = exactalg::rat_floor_long(r);
    return Exponent(r - fl, fl);
  }
  static Exponent integer(long m) { return Exponent(Rat(0), m); }

  Rat value() const { return coset + offset; }
  bool is_integer() const { return coset == 0; }

  Exponent operator+(const Exponent& o) const { return from_value(value() + o.value()); }
  Exponent operator-(const Exponent& o) const { return from_value(value() - o.value()); }
  Exponent operator+(long m) const { return Exponent(coset, offset + m); }
  Exponent operator-(long m) const { return Exponent(coset, offset - m); }

  bool operator==(const Exponent& o) const { return coset == o.coset && offset == o.offset; }
  bool operator!=(const Exponent& o) const { return !(*this == o); }
  bool operator<(const Exponent& o) const {
    Rat a = value(), b = o.value();
    return a < b;
  }

  std::string str() const {
    if (coset == 0) return std::to_string(offset);
    std::string s = exactalg::rat_str(coset);
    if (offset > 0) s += "+" + std::to_string(offset);
    if (offset < 0) s += std::to_string(offset);
    return s;
  }
};

/// Rational extended with the two infinities; used for support and
/// completeness bounds on series windows.
struct RatExt {
  int inf = 0; // -1: -infinity, 0: finite, +1: +infinity
  Rat v;

  RatExt() : v(0) {}
  RatExt(Rat r) : v(std::move(r)) {}
  RatExt(long n) : v(n) {}
  static RatExt pos_inf() { RatExt r; r.inf = 1; return r; }
  static RatExt neg_inf() { RatExt r; r.inf = -1; return r; }

  bool finite() const { return inf == 0; }

  bool operator==(const RatExt& o) const {
    if (inf != o.inf) return false;
    return inf != 0 || v == o.v;
  }
  bool operator!=(const RatExt& o) const { return !(*this == o); }
  bool operator<(const RatExt& o) const {
    if (inf != o.inf) return inf < o.inf;
    return inf == 0 && v < o.v;
  }
  bool operator<=(const RatExt& o) const { return *this < o || *this == o; }

  /// Addition with infinity absorption; opposite infinities are a caller bug.
  RatExt operator+(const RatExt& o) const {
    if (inf != 0 || o.inf != 0) {
      int s = inf != 0 ? inf : o.inf;
      if (inf != 0 && o.inf != 0 && inf != o.inf)
        throw TwistError("PreconditionViolated", "adding opposite infinities");
      RatExt r;
      r.inf = s;
      return r;
    }
    return RatExt(v + o.v);
  }
  RatExt operator-() const {
    RatExt r = *this;
    r.inf = -r.inf;
    if (r.inf == 0) r.v = -r.v;
    return r;
  }
  RatExt operator-(const RatExt& o) const { return *this + (-o); }

  std::string str() const {
    if (inf > 0) return "+inf";
    if (inf < 0) return "-inf";
    return exactalg::rat_str(v);
  }
};

inline RatExt ext_min(const RatExt& a, const RatExt& b) { return a < b ? a : b; }
inline RatExt ext_max(const RatExt& a, const RatExt& b) { return a < b ? b : a; }

} // namespace twistcalc::logcalc
