#pragma once

#include <map>
#include <numeric>
#include <sstream>
#include <vector>

#include "rational.hpp"

namespace twistcalc::exactalg {

namespace detail {

// Dense polynomial over Rat, index = degree, trailing zeros trimmed.
using Poly = std::vector<Rat>;

inline void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  poly_trim(c);
  return c;
}

// Division with remainder; requires nonzero divisor.
inline void poly_divmod(Poly a, const Poly& b, Poly& q, Poly& r) {
  if (b.empty()) throw TwistError("NonInvertible", "polynomial division by zero");
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat(0));
  while (a.size() >= b.size()) {
    Rat f = a.back() / b.back();
    size_t off = a.size() - b.size();
    q[off] = f;
    for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    poly_trim(a); // leading term cancels exactly, so the degree drops
    if (a.empty()) break;
  }
  r = a;
  poly_trim(q);
}

struct CycloField {
  unsigned T = 1;
  unsigned phi = 1;
  Poly phipoly;                         // cyclotomic polynomial, monic, degree phi
  std::vector<std::vector<Rat>> powtab; // z^k reduced, k in [phi, T-1] (at least)
};

inline const CycloField& cyclo_field(unsigned T) {
  static std::map<unsigned, CycloField> cache;
  auto it = cache.find(T);
  if (it != cache.end()) return it->second;
  if (T == 0) throw TwistError("BadInput", "conductor must be positive");

  // Phi_T = (x^T - 1) / prod_{d | T, d < T} Phi_d
  Poly num(T + 1, Rat(0));
  num[0] = Rat(-1);
  num[T] = Rat(1);
  for (unsigned d = 1; d < T; ++d) {
    if (T % d) continue;
    const CycloField& fd = cyclo_field(d);
    Poly q, r;
    poly_divmod(num, fd.phipoly, q, r);
    if (!r.empty()) throw TwistError("BadInput", "cyclotomic division failed");
    num = q;
  }
  CycloField f;
  f.T = T;
  f.phipoly = num;
  f.phi = static_cast<unsigned>(num.size() - 1);

  // z^k for k >= phi, reduced mod Phi_T; cover products and promotions.
  unsigned maxk = std::max(T == 1 ? 1u : T - 1, 2 * f.phi - 2 < f.phi ? f.phi : 2 * f.phi - 2);
  std::vector<Rat> cur(f.phi, Rat(0));
  if (f.phi == 1) {
    // z^1 = -phipoly[0]
    cur[0] = -f.phipoly[0];
  } else {
    cur[1] = Rat(1); // z^1
  }
  // advance cur from exponent 1 upward, storing exponents >= phi
  auto shift_reduce = [&f](std::vector<Rat>& v) {
    Rat lead = v[f.phi - 1];
    for (unsigned i = f.phi - 1; i > 0; --i) v[i] = v[i - 1];
    v[0] = Rat(0);
    if (lead != 0)
      for (unsigned i = 0; i < f.phi; ++i) v[i] -= lead * f.phipoly[i];
  };
  for (unsigned k = 1; k <= maxk; ++k) {
    if (k >= f.phi) f.powtab.push_back(cur);
    if (k < maxk) shift_reduce(cur);
  }
  return cache.emplace(T, std::move(f)).first->second;
}

} // namespace detail

/// Element of the cyclotomic field Q(zeta_T), stored canonically as a
/// polynomial in zeta_T of degree < phi(T) (reduced mod the T-th cyclotomic
/// polynomial). Arithmetic between different conductors promotes to the lcm.
class Cyclo {
public:
  Cyclo() : T_(1), c_(1, Rat(0)) {}
  explicit Cyclo(const Rat& r) : T_(1), c_(1, r) {}

  static Cyclo root(unsigned T, long k) {
    const auto& f = detail::cyclo_field(T);
    long kk = ((k % static_cast<long>(T)) + static_cast<long>(T)) % static_cast<long>(T);
    Cyclo z;
    z.T_ = T;
    z.c_.assign(f.phi, Rat(0));
    if (static_cast<unsigned>(kk) < f.phi)
      z.c_[static_cast<size_t>(kk)] = Rat(1);
    else
      z.c_ = f.powtab[static_cast<size_t>(kk) - f.phi];
    return z;
  }

  unsigned conductor() const { return T_; }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }

  bool is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }

  Rat rat_value() const {
    if (!is_rational()) throw TwistError("BadInput", "cyclotomic value is irrational");
    return c_[0];
  }

  /// Re-express in Q(zeta_T2); requires conductor() | T2.
  Cyclo promoted(unsigned T2) const {
    if (T2 == T_) return *this;
    if (T2 % T_) throw TwistError("BadInput", "conductor does not divide target");
    const auto& f2 = detail::cyclo_field(T2);
    unsigned m = T2 / T_;
    Cyclo out;
    out.T_ = T2;
    out.c_.assign(f2.phi, Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      Cyclo zi = root(T2, static_cast<long>(i * m));
      for (unsigned j = 0; j < f2.phi; ++j) out.c_[j] += c_[i] * zi.c_[j];
    }
    return out;
  }

  friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
    auto [x, y] = Cyclo::aligned(a, b);
    for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
    return x;
  }
  Cyclo& operator+=(const Cyclo& o) { return *this = *this + o; }
  Cyclo& operator-=(const Cyclo& o) { return *this = *this - o; }
  friend Cyclo operator-(const Cyclo& a, const Cyclo& b) {
    auto [x, y] = Cyclo::aligned(a, b);
    for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] -= y.c_[i];
    return x;
  }
  Cyclo operator-() const {
    Cyclo x = *this;
    for (auto& v : x.c_) v = -v;
    return x;
  }
  friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
    auto [x, y] = Cyclo::aligned(a, b);
    const auto& f = detail::cyclo_field(x.T_);
    std::vector<Rat> prod(2 * f.phi - 1, Rat(0));
    for (size_t i = 0; i < f.phi; ++i) {
      if (x.c_[i] == 0) continue;
      for (size_t j = 0; j < f.phi; ++j) prod[i + j] += x.c_[i] * y.c_[j];
    }
    Cyclo out;
    out.T_ = x.T_;
    out.c_.assign(f.phi, Rat(0));
    for (size_t k = 0; k < prod.size(); ++k) {
      if (prod[k] == 0) continue;
      if (k < f.phi) {
        out.c_[k] += prod[k];
      } else {
        const auto& red = f.powtab[k - f.phi];
        for (size_t j = 0; j < f.phi; ++j) out.c_[j] += prod[k] * red[j];
      }
    }
    return out;
  }
  friend Cyclo operator*(const Cyclo& a, const Rat& r) {
    Cyclo x = a;
    for (auto& v : x.c_) v *= r;
    return x;
  }

  /// Multiplicative inverse via the extended Euclid algorithm mod Phi_T.
  Cyclo inverse() const {
    if (is_zero()) throw TwistError("NonInvertible", "inverse of zero");
    if (is_rational()) return Cyclo(Rat(1) / c_[0]).promoted(T_);
    const auto& f = detail::cyclo_field(T_);
    // gcd(a, Phi) = 1 since Phi is irreducible and a != 0 of lower degree.
    detail::Poly r0 = f.phipoly, r1(c_.begin(), c_.end());
    detail::poly_trim(r1);
    detail::Poly s0 = {}, s1 = {Rat(1)}; // coefficients of a
    while (!r1.empty()) {
      detail::Poly q, r2;
      detail::poly_divmod(r0, r1, q, r2);
      detail::Poly qs = detail::poly_mul(q, s1);
      detail::Poly s2 = s0;
      if (s2.size() < qs.size()) s2.resize(qs.size(), Rat(0));
      for (size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
      detail::poly_trim(s2);
      r0 = r1; r1 = r2; s0 = s1; s1 = s2;
    }
    // r0 = gcd (a nonzero constant), s0 * a = r0 mod Phi
    if (r0.size() != 1) throw TwistError("NonInvertible", "unexpected gcd degree");
    Cyclo out;
    out.T_ = T_;
    out.c_.assign(f.phi, Rat(0));
    for (size_t i = 0; i < s0.size() && i < f.phi; ++i) out.c_[i] = s0[i] / r0[0];
    return out;
  }

  bool operator==(const Cyclo& o) const {
    if (T_ == o.T_) return c_ == o.c_;
    auto [x, y] = aligned(*this, o);
    return x.c_ == y.c_;
  }
  bool operator!=(const Cyclo& o) const { return !(*this == o); }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << rat_str(c_[i]);
      if (i > 0) os << "*z" << T_ << "^" << i;
    }
    if (first) os << "0";
    return os.str();
  }

private:
  static std::pair<Cyclo, Cyclo> aligned(const Cyclo& a, const Cyclo& b) {
    unsigned T = std::lcm(a.T_, b.T_);
    return {a.promoted(T), b.promoted(T)};
  }

  unsigned T_;
  std::vector<Rat> c_;
};

} // namespace twistcalc::exactalg
