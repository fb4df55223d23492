#pragma once

#include <map>
#include <sstream>

#include "cyclotomic.hpp"

namespace twistcalc::exactalg {

/// Exact scalar: a Laurent polynomial in the formal symbol tau = (2*pi*i)^{-1}
/// with coefficients in Q(zeta_T). Canonical form stores no zero coefficients,
/// so structural equality is semantic equality.
class Scalar {
public:
  Scalar() = default;
  Scalar(int n) : Scalar(static_cast<long>(n)) {}
  Scalar(long n) { if (n) t_.emplace(0, Cyclo(Rat(n))); }
  Scalar(const Rat& r) { if (r != 0) t_.emplace(0, Cyclo(r)); }
  explicit Scalar(const Cyclo& c) { if (!c.is_zero()) t_.emplace(0, c); }
  Scalar(double) = delete; // exactness: no floating point enters

  static Scalar tau(int p = 1) {
    Scalar s;
    s.t_.emplace(p, Cyclo(Rat(1)));
    return s;
  }
  /// (2*pi*i)^p = tau^{-p}
  static Scalar two_pi_i(int p = 1) { return tau(-p); }
  static Scalar root(unsigned T, long k) { return Scalar(Cyclo::root(T, k)); }

  bool is_zero() const { return t_.empty(); }
  bool is_tau_free() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first == 0); }
  bool is_rational() const { return is_tau_free() && (t_.empty() || t_.begin()->second.is_rational()); }

  Rat rat_value() const {
    if (t_.empty()) return Rat(0);
    if (!is_rational()) throw TwistError("BadInput", "scalar is not rational");
    return t_.begin()->second.rat_value();
  }
  Cyclo cyclo_value() const {
    if (t_.empty()) return Cyclo();
    if (!is_tau_free()) throw TwistError("BadInput", "scalar carries tau");
    return t_.begin()->second;
  }

  const std::map<int, Cyclo>& terms() const { return t_; }

  Scalar& operator+=(const Scalar& o) {
    for (const auto& [p, c] : o.t_) add_term(p, c);
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    for (const auto& [p, c] : o.t_) add_term(p, -c);
    return *this;
  }
  friend Scalar operator+(Scalar a, const Scalar& b) { a += b; return a; }
  friend Scalar operator-(Scalar a, const Scalar& b) { a -= b; return a; }
  Scalar operator-() const {
    Scalar s;
    for (const auto& [p, c] : t_) s.t_.emplace(p, -c);
    return s;
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    Scalar s;
    for (const auto& [pa, ca] : a.t_)
      for (const auto& [pb, cb] : b.t_) s.add_term(pa + pb, ca * cb);
    return s;
  }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  friend Scalar operator*(const Scalar& a, const Rat& r) {
    if (r == 0) return Scalar();
    Scalar s;
    for (const auto& [p, c] : a.t_) s.t_.emplace(p, c * r);
    return s;
  }
  friend Scalar operator/(const Scalar& a, const Rat& r) {
    if (r == 0) throw TwistError("NonInvertible", "division by zero rational");
    return a * (Rat(1) / r);
  }

  /// Shift by tau^p.
  Scalar mul_tau(int p) const {
    Scalar s;
    for (const auto& [q, c] : t_) s.t_.emplace(q + p, c);
    return s;
  }

  /// Inverse of a tau-monomial; general Laurent polynomials are not units.
  Scalar inverse() const {
    if (t_.empty()) throw TwistError("NonInvertible", "inverse of zero scalar");
    if (t_.size() != 1)
      throw TwistError("NonInvertible", "scalar is not a tau-monomial unit");
    Scalar s;
    s.t_.emplace(-t_.begin()->first, t_.begin()->second.inverse());
    return s;
  }

  Scalar pow(unsigned e) const {
    Scalar acc(1), base = *this;
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  bool operator==(const Scalar& o) const {
    if (t_.size() != o.t_.size()) return false;
    auto it = t_.begin(), jt = o.t_.begin();
    for (; it != t_.end(); ++it, ++jt)
      if (it->first != jt->first || !(it->second == jt->second)) return false;
    return true;
  }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  std::string str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, c] : t_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.str() << ")";
      if (p != 0) os << "*tau^" << p;
    }
    return os.str();
  }

private:
  void add_term(int p, const Cyclo& c) {
    if (c.is_zero()) return;
    auto it = t_.find(p);
    if (it == t_.end()) {
      t_.emplace(p, c);
      return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) t_.erase(it);
  }

  std::map<int, Cyclo> t_; // tau power -> nonzero coefficient
};

inline Scalar operator*(const Rat& r, const Scalar& s) { return s * r; }

} // namespace twistcalc::exactalg
