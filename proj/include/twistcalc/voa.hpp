#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "graded_operator.hpp"

namespace twistcalc::voa {

using exactalg::Cyclo;
using exactalg::GradedOperator;
using exactalg::Mat;
using exactalg::Rat;
using exactalg::rat;
using exactalg::RowSpan;
using exactalg::Scalar;
using exactalg::SpanSolver;

/// Reference to a basis vector: (graded slot, index within the slot).
/// For algebras the slot is the weight; modules may scale their degrees.
using BRef = std::pair<int, int>;

inline std::string bref_str(const BRef& b) {
  return "(" + std::to_string(b.first) + "," + std::to_string(b.second) + ")";
}

/// Sparse vector in a graded space, keyed by basis reference.
struct Vec {
  std::map<BRef, Scalar> c;

  Vec() = default;
  static Vec unit(const BRef& b) {
    Vec v;
    v.c.emplace(b, Scalar(1));
    return v;
  }

  bool is_zero() const { return c.empty(); }

  void
  accum(const BRef& b, const Scalar& s) {
    if (s.is_zero()) return;
    auto it = c.find(b);
    if (it == c.end()) {
      c.emplace(b, s);
    } else {
      it->second += s;
      if (it->second.is_zero()) c.erase(it);
    }
  }

  friend Vec operator+(const Vec& a, const Vec& b) {
    Vec out = a;
    for (const auto& [k, s] : b.c) out.accum(k, s);
    return out;
  }
  friend Vec operator-(const Vec& a, const Vec& b) { return a + b * Scalar(-1); }
  friend Vec operator*(const Vec& a, const Scalar& s) {
    Vec out;
    if (s.is_zero()) return out;
    for (const auto& [k, v] : a.c) out.accum(k, v * s);
    return out;
  }

  bool operator==(const Vec& o) const { return c == o.c; }
  bool operator!=(const Vec& o) const { return !(*this == o); }

  /// True when all components live in one graded slot.
  bool homogeneous(int* slot = nullptr) const {
    int w = 0;
    bool first = true;
    for (const auto& [k, v] : c) {
      if (first) {
        w = k.first;
        first = false;
      } else if (k.first != w) {
        return false;
      }
    }
    if (slot) *slot = first ? -1 : w;
    return true;
  }

  std::string str() const {
    if (c.empty()) return "0";
    std::string s;
    for (const auto& [k, v] : c) {
      if (!s.empty()) s += " + ";
      s += v.str() + "*" + bref_str(k);
    }
    return s;
  }
};

/// Applies a weight-preserving graded operator to a vector.
inline Vec apply(const GradedOperator& g, const Vec& v) {
  Vec out;
  for (const auto& [b, s] : v.c) {
    const auto& m = g.block(b.first);
    for (int i = 0; i < m.r; ++i) {
      const Scalar& entry = m.at(i, b.second);
      if (!entry.is_zero()) out.accum({b.first, i}, entry * s);
    }
  }
  return out;
}

/// A vertex operator algebra tabulated up to a weight cutoff. Product
/// vectors u(n)v are stored for every n whose result weight stays within
/// the cutoff; a provider closure may fill entries lazily.
struct VOAData {
  int w_max = 0;
  std::vector<int> dims;                           // per weight 0..w_max
  std::vector<std::vector<std::string>> names;     // per weight, per index
  BRef vacuum{0, 0};
  Vec omega;                                       // conformal vector (weight 2)
  Rat central_charge = Rat(0);
  bool cft_type = true;
  unsigned conductor = 1;

  std::function<Vec(const BRef&, long, const BRef&)> provider;
  mutable std::map<std::tuple<BRef, long, BRef>, Vec> products;

  int dim(int w) const { return (w >= 0 && w <= w_max) ? dims[static_cast<size_t>(w)] : 0; }
  int total_dim() const {
    int d = 0;
    for (int x : dims) d += x;
    return d;
  }

  const std::string& name_of(const BRef& b) const {
    return names[static_cast<size_t>(b.first)][static_cast<size_t>(b.second)];
  }

  void set_product(const BRef& u, long n, const BRef& v, Vec result) {
    products[{u, n, v}] = std::move(result);
  }

  /// u(n)v for basis u, v. Result weight above the cutoff is an error;
  /// below zero it is exactly zero (CFT type).
  Vec product(const BRef& u, long n, const BRef& v) const {
    int w = u.first + v.first - static_cast<int>(n) - 1;
    if (w < 0) return Vec{};
    if (w > w_max)
      throw TwistError("TableIncomplete", "product " + name_of(u) + "(" + std::to_string(n) +
                                              ")" + name_of(v) + " has weight " +
                                              std::to_string(w) + " beyond cutoff " +
                                              std::to_string(w_max));
    auto it = products.find({u, n, v});
    if (it != products.end()) return it->second;
    if (provider) {
      Vec r = provider(u, n, v);
      products.emplace(std::make_tuple(u, n, v), r);
      return r;
    }
    return Vec{};
  }

  /// Bilinear extension of the product to vectors.
  Vec product(const Vec& u, long n, const Vec& v) const {
    Vec out;
    for (const auto& [ub, us] : u.c)
      for (const auto& [vb, vs] : v.c) {
        Vec p = product(ub, n, vb);
        for (const auto& [rb, rs] : p.c) out.accum(rb, rs * us * vs);
      }
    return out;
  }

  /// Virasoro mode L(m) = omega(m+1).
  Vec L(long m, const Vec& v) const { return product(omega, m + 1, v); }

  Vec vacuum_vec() const { return Vec::unit(vacuum); }

  /// Materializes every in-range product through the provider.
  void materialize_all() const {
    if (!provider) return;
    for (int uw = 0; uw <= w_max; ++uw)
      for (int ui = 0; ui < dim(uw); ++ui)
        for (int vw = 0; vw <= w_max; ++vw)
          for (int vi = 0; vi < dim(vw); ++vi)
            for (long n = uw + vw - 1 - w_max; n <= uw + vw - 1; ++n)
              product({uw, ui}, n, {vw, vi});
  }
};

/// Automorphism with its multiplicative and exponent-level decompositions.
struct AutomorphismData {
  GradedOperator g;
  unsigned T = 1;
  GradedOperator S, N;      // g = exp(2 pi i (S + N))
  GradedOperator sem, unip; // g = sem * unip
  std::set<Rat> PV;         // S-spectrum, in [0,1)
  int K = 0;                // max log power: nilpotency index of N minus one
  std::map<Rat, GradedOperator> proj; // spectral projector per S-eigenvalue

  Rat alpha_of(const Vec& v) const {
    // the S-eigenvalue of an eigenvector; PreconditionViolated otherwise
    for (const auto& [a, p] : proj) {
      Vec pv = apply(p, v);
      if (pv == v) return a;
      if (!pv.is_zero() && pv != v)
        throw TwistError("PreconditionViolated", "vector mixes S-eigenspaces: " + v.str());
    }
    throw TwistError("PreconditionViolated", "vector has no S-eigencomponent: " + v.str());
  }

  Vec project(const Rat& a, const Vec& v) const {
    auto it = proj.find(a);
    if (it == proj.end()) return Vec{};
    return apply(it->second, v);
  }
};

struct CheckReport {
  bool pass = true;
  std::string locus;  // first failure, with full indices
  long checks = 0;    // number of coefficient identities verified

  void fail(const std::string& where) {
    if (pass) {
      pass = false;
      locus = where;
    }
  }
};

/// Identity automorphism data for a tabulated algebra.
inline AutomorphismData identity_automorphism(const VOAData& v) {
  AutomorphismData a;
  a.T = 1;
  for (int w = 0; w <= v.w_max; ++w) {
    a.g.set_block(w, Mat<Scalar>::identity(v.dim(w)));
    a.S.set_block(w, Mat<Scalar>::zero(v.dim(w), v.dim(w)));
    a.N.set_block(w, Mat<Scalar>::zero(v.dim(w), v.dim(w)));
  }
  a.sem = a.g;
  a.unip = a.g;
  a.PV = {Rat(0)};
  a.K = 0;
  a.proj.emplace(Rat(0), a.g);
  return a;
}

/// Splits g into semisimple and unipotent parts, extracts the S-spectrum and
/// the nilpotent exponent, checks the automorphism property on every
/// tabulated product, and verifies that N acts as a derivation.
inline AutomorphismData decompose_automorphism(const VOAData& v, const GradedOperator& g,
                                               unsigned T) {
  AutomorphismData a;
  a.g = g;
  a.T = T;

  Vec vac = v.vacuum_vec();
  if (apply(g, vac) != vac)
    throw TwistError("NotAutomorphism", "g does not fix the vacuum");
  if (apply(g, v.omega) != v.omega)
    throw TwistError("NotAutomorphism", "g does not fix the conformal vector");

  for (int uw = 0; uw <= v.w_max; ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui)
      for (int vw = 0; vw <= v.w_max; ++vw)
        for (int vi = 0; vi < v.dim(vw); ++vi) {
          BRef ub{uw, ui}, vb{vw, vi};
          Vec gu = apply(g, Vec::unit(ub));
          Vec gv = apply(g, Vec::unit(vb));
          for (long n = uw + vw - 1 - v.w_max; n <= uw + vw - 1; ++n) {
            Vec lhs = apply(g, v.product(ub, n, vb));
            Vec rhs = v.product(gu, n, gv);
            if (lhs != rhs)
              throw TwistError("NotAutomorphism",
                               "g(u(n)v) != (gu)(n)(gv) at u=" + v.name_of(ub) +
                                   " n=" + std::to_string(n) + " v=" + v.name_of(vb));
          }
        }

  auto jr = exactalg::jordan_chevalley(g, T);
  a.S = jr.S;
  a.N = jr.N;
  a.sem = jr.sem;
  a.unip = jr.unip;
  a.PV = jr.spectrum;
  a.K = jr.max_log_power;

  // N is a derivation: N(u(n)v) = (Nu)(n)v + u(n)(Nv) on tabulated products
  for (int uw = 0; uw <= v.w_max; ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui)
      for (int vw = 0; vw <= v.w_max; ++vw)
        for (int vi = 0; vi < v.dim(vw); ++vi) {
          BRef ub{uw, ui}, vb{vw, vi};
          Vec nu = apply(a.N, Vec::unit(ub));
          Vec nv = apply(a.N, Vec::unit(vb));
          for (long n = uw + vw - 1 - v.w_max; n <= uw + vw - 1; ++n) {
            Vec lhs = apply(a.N, v.product(ub, n, vb));
            Vec rhs = v.product(nu, n, Vec::unit(vb)) + v.product(Vec::unit(ub), n, nv);
            if (lhs != rhs)
              throw TwistError("NotAutomorphism",
                               "N fails the derivation rule at u=" + v.name_of(ub) +
                                   " n=" + std::to_string(n) + " v=" + v.name_of(vb));
          }
        }

  // Lagrange projectors onto the S-eigenspaces (S is semisimple)
  for (const Rat& alpha : a.PV) {
    GradedOperator p;
    for (const auto& [w, sblk] : a.S.blocks()) {
      Mat<Cyclo> sc = exactalg::mat_to_cyclo(sblk);
      Mat<Cyclo> acc = Mat<Cyclo>::identity(sc.r);
      for (const Rat& beta : a.PV) {
        if (beta == alpha) continue;
        Mat<Cyclo> shifted = sc - Mat<Cyclo>::identity(sc.r).scaled(Cyclo(beta));
        Rat denom = alpha - beta;
        acc = acc * shifted;
        for (auto& entry : acc.a) entry = entry * (Rat(1) / denom);
      }
      p.set_block(w, exactalg::mat_to_scalar(acc));
    }
    a.proj.emplace(alpha, std::move(p));
  }
  return a;
}

/// Automorphism data for g = exp(2 pi i N) with N a given nilpotent
/// derivation. Bypasses the Jordan split (the exponent is handed in), but
/// runs the same derivation and automorphism scans over the table.
inline AutomorphismData automorphism_from_nilpotent(const VOAData& v, const GradedOperator& nop) {
  AutomorphismData a;
  a.T = 1;

  int nilp = 0;
  GradedOperator p = nop;
  while (!p.is_zero()) {
    ++nilp;
    if (nilp > v.total_dim())
      throw TwistError("PreconditionViolated", "exponent operator is not nilpotent");
    p = p * nop;
  }
  a.K = nilp;
  a.N = nop;
  a.S = nop.scaled(Scalar(0));
  a.sem = nop.identity_like();

  // g = sum_j (2 pi i N)^j / j!
  GradedOperator g = nop.identity_like();
  GradedOperator term = nop.identity_like();
  Rat fact = 1;
  for (int j = 1; j <= nilp; ++j) {
    term = term * nop;
    fact *= j;
    g = g + term.scaled(Scalar::two_pi_i(j) * Scalar(Rat(1) / fact));
  }
  a.g = g;
  a.unip = g;
  a.PV = {Rat(0)};
  a.proj.emplace(Rat(0), nop.identity_like());

  Vec vac = v.vacuum_vec();
  if (!apply(nop, vac).is_zero())
    throw TwistError("NotAutomorphism", "exponent does not kill the vacuum");
  if (!apply(nop, v.omega).is_zero())
    throw TwistError("NotAutomorphism", "exponent does not kill the conformal vector");

  for (int uw = 0; uw <= v.w_max; ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui)
      for (int vw = 0; vw <= v.w_max; ++vw)
        for (int vi = 0; vi < v.dim(vw); ++vi) {
          BRef ub{uw, ui}, vb{vw, vi};
          Vec nu = apply(nop, Vec::unit(ub));
          Vec nv = apply(nop, Vec::unit(vb));
          Vec gu = apply(g, Vec::unit(ub));
          Vec gv = apply(g, Vec::unit(vb));
          for (long n = uw + vw - 1 - v.w_max; n <= uw + vw - 1; ++n) {
            Vec dl = apply(nop, v.product(ub, n, vb));
            Vec dr = v.product(nu, n, Vec::unit(vb)) + v.product(Vec::unit(ub), n, nv);
            if (dl != dr)
              throw TwistError("NotAutomorphism",
                               "N fails the derivation rule at u=" + v.name_of(ub) +
                                   " n=" + std::to_string(n) + " v=" + v.name_of(vb));
            Vec gl = apply(g, v.product(ub, n, vb));
            Vec gr = v.product(gu, n, gv);
            if (gl != gr)
              throw TwistError("NotAutomorphism",
                               "g(u(n)v) != (gu)(n)(gv) at u=" + v.name_of(ub) +
                                   " n=" + std::to_string(n) + " v=" + v.name_of(vb));
          }
        }
  return a;
}

/// Untwisted Jacobi identity in coefficient form, plus vacuum, creation,
/// grading, and L(-1)-derivative table identities. The window bounds the
/// participating basis weights.
inline CheckReport check_voa_axioms(const VOAData& v, int window) {
  CheckReport rep;
  int W = std::min(window, v.w_max);

  // vacuum: 1(n)u = delta_{n,-1} u; creation: u(-1)1 = u, u(n)1 = 0 for n >= 0
  for (int uw = 0; uw <= W && rep.pass; ++uw)
    for (int ui = 0; ui < v.dim(uw) && rep.pass; ++ui) {
      BRef u{uw, ui};
      for (long n = uw - 1 - v.w_max; n <= uw - 1; ++n) {
        Vec lhs = v.product(v.vacuum, n, u);
        Vec expect = n == -1 ? Vec::unit(u) : Vec{};
        ++rep.checks;
        if (lhs != expect) {
          rep.fail("vacuum property at 1(" + std::to_string(n) + ")" + v.name_of(u));
          break;
        }
        Vec cr = v.product(u, n, v.vacuum);
        ++rep.checks;
        Vec cexp = n == -1 ? Vec::unit(u) : (n >= 0 ? Vec{} : cr);
        if ((n >= -1) && cr != cexp) {
          rep.fail("creation property at " + v.name_of(u) + "(" + std::to_string(n) + ")1");
          break;
        }
      }
    }
  if (!rep.pass) return rep;

  // grading: tabulated products are homogeneous of the declared weight
  for (const auto& [key, result] : v.products) {
    const auto& [ub, n, vb] = key;
    int expect = ub.first + vb.first - static_cast<int>(n) - 1;
    ++rep.checks;
    for (const auto& [rb, rs] : result.c)
      if (rb.first != expect) {
        rep.fail("grading violated at " + v.name_of(ub) + "(" + std::to_string(n) + ")" +
                 v.name_of(vb));
        return rep;
      }
  }

  // L(-1)-derivative: (L(-1)u)(n) = -n u(n-1) on the window
  for (int uw = 0; uw <= W && rep.pass; ++uw)
    for (int ui = 0; ui < v.dim(uw) && rep.pass; ++ui)
      for (int vw = 0; vw <= W && rep.pass; ++vw)
        for (int vi = 0; vi < v.dim(vw) && rep.pass; ++vi) {
          BRef u{uw, ui}, w{vw, vi};
          if (uw + 1 > v.w_max) continue; // L(-1)u exits the table
          Vec lu = v.L(-1, Vec::unit(u));
          for (long n = uw + vw - v.w_max; n <= uw + vw; ++n) {
            Vec lhs = v.product(lu, n, Vec::unit(w));
            Vec rhs = v.product(u, n - 1, w) * Scalar(rat(-n));
            ++rep.checks;
            if (lhs != rhs) {
              rep.fail("L(-1)-derivative at (L(-1)" + v.name_of(u) + ")(" + std::to_string(n) +
                       ")" + v.name_of(w));
              break;
            }
          }
        }
  if (!rep.pass) return rep;

  // Jacobi identity, coefficient form: for all m, n, p,
  //   sum_i binom(m,i) (u(p+i)v)(m+n-i) w
  //     = sum_i (-1)^i binom(p,i) [ u(m+p-i)(v(n+i)w)
  //                                 - (-1)^p v(n+p-i)(u(m+i)w) ]
  for (int uw = 0; uw <= W; ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui)
      for (int vw = 0; vw <= W; ++vw)
        for (int vi = 0; vi < v.dim(vw); ++vi)
          for (int ww = 0; ww <= W; ++ww)
            for (int wi = 0; wi < v.dim(ww); ++wi) {
              BRef ub{uw, ui}, vb{vw, vi}, wb{ww, wi};
              long mlo = uw + ww - 1 - v.w_max, mhi = uw + ww - 1;
              long nlo = vw + ww - 1 - v.w_max, nhi = vw + ww - 1;
              long plo = uw + vw - 1 - v.w_max, phi = uw + vw - 1;
              for (long m = mlo; m <= mhi; ++m)
                for (long n = nlo; n <= nhi; ++n)
                  for (long p = plo; p <= phi; ++p) {
                    long total = uw + vw + ww;
                    if (total - m - n - p - 2 > v.w_max) continue;
                    Vec lhs;
                    for (long i = 0;; ++i) {
                      // (u(p+i)v) vanishes beyond weight 0
                      if (uw + vw - (p + i) - 1 < 0) break;
                      Vec uv = v.product(ub, p + i, vb);
                      if (!uv.is_zero())
                        lhs = lhs + v.product(uv, m + n - i, Vec::unit(wb)) *
                                        Scalar(exactalg::rat_binom(rat(m), i));
                    }
                    Vec rhs;
                    for (long i = 0;; ++i) {
                      if (vw + ww - (n + i) - 1 < 0) break;
                      Vec vw_ = v.product(vb, n + i, wb);
                      if (!vw_.is_zero())
                        rhs = rhs + v.product(Vec::unit(ub), m + p - i, vw_) *
                                        Scalar(exactalg::rat_binom(rat(p), i) *
                                               (i % 2 ? rat(-1) : rat(1)));
                    }
                    for (long i = 0;; ++i) {
                      if (uw + ww - (m + i) - 1 < 0) break;
                      Vec uw_ = v.product(ub, m + i, wb);
                      if (!uw_.is_zero())
                        rhs = rhs + v.product(Vec::unit(vb), n + p - i, uw_) *
                                        Scalar(exactalg::rat_binom(rat(p), i) *
                                               (i % 2 ? rat(-1) : rat(1)) *
                                               (p % 2 ? rat(1) : rat(-1)));
                    }
                    ++rep.checks;
                    if (lhs != rhs) {
                      rep.fail("Jacobi at u=" + v.name_of(ub) + " v=" + v.name_of(vb) +
                               " w=" + v.name_of(wb) + " (m,n,p)=(" + std::to_string(m) + "," +
                               std::to_string(n) + "," + std::to_string(p) + ")");
                      return rep;
                    }
                  }
            }

  // Virasoro bracket: [L(a), L(b)] = (a-b)L(a+b) + delta_{a+b,0}(a^3-a)c/12
  for (int ww = 0; ww <= W; ++ww)
    for (int wi = 0; wi < v.dim(ww); ++wi) {
      Vec x = Vec::unit({ww, wi});
      for (long aa = -2; aa <= 2; ++aa)
        for (long bb = -2; bb <= 2; ++bb) {
          if (ww - aa - bb > v.w_max || ww - aa > v.w_max || ww - bb > v.w_max) continue;
          Vec lhs = v.L(aa, v.L(bb, x)) - v.L(bb, v.L(aa, x));
          Vec rhs = v.L(aa + bb, x) * Scalar(rat(aa - bb));
          if (aa + bb == 0)
            rhs = rhs + x * Scalar(rat(aa * aa * aa - aa) * v.central_charge / rat(12));
          ++rep.checks;
          if (lhs != rhs) {
            rep.fail("Virasoro bracket at [L(" + std::to_string(aa) + "),L(" +
                     std::to_string(bb) + ")] on " + v.name_of({ww, wi}));
            return rep;
          }
        }
    }
  return rep;
}

/// The S-eigenvalue rule for products: s(alpha, beta) = alpha + beta,
/// reduced by 1 when the sum leaves [0,1).
inline Rat s_rule(const Rat& alpha, const Rat& beta) {
  Rat s = alpha + beta;
  return s < 1 ? s : s - 1;
}

/// Checks the S-eigenvalue rule and the semisimple conjugation identity
/// sem Y(u,x) sem^{-1} = Y(sem u, x) on all tabulated products.
inline CheckReport check_s_rule(const VOAData& v, const AutomorphismData& a) {
  CheckReport rep;
  for (const Rat& alpha : a.PV)
    for (const Rat& beta : a.PV) {
      Rat s = s_rule(alpha, beta);
      for (int uw = 0; uw <= v.w_max; ++uw)
        for (int ui = 0; ui < v.dim(uw); ++ui)
          for (int vw = 0; vw <= v.w_max; ++vw)
            for (int vi = 0; vi < v.dim(vw); ++vi) {
              Vec ua = a.project(alpha, Vec::unit({uw, ui}));
              Vec vb = a.project(beta, Vec::unit({vw, vi}));
              if (ua.is_zero() || vb.is_zero()) continue;
              for (long n = uw + vw - 1 - v.w_max; n <= uw + vw - 1; ++n) {
                Vec p = v.product(ua, n, vb);
                if (p.is_zero()) continue;
                ++rep.checks;
                if (a.project(s, p) != p) {
                  rep.fail("s-rule fails at alpha=" + exactalg::rat_str(alpha) +
                           " beta=" + exactalg::rat_str(beta) + " u=" + v.name_of({uw, ui}) +
                           " n=" + std::to_string(n) + " v=" + v.name_of({vw, vi}));
                  return rep;
                }
              }
            }
    }
  // conjugation by the semisimple factor
  for (int uw = 0; uw <= v.w_max; ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui)
      for (int vw = 0; vw <= v.w_max; ++vw)
        for (int vi = 0; vi < v.dim(vw); ++vi) {
          BRef ub{uw, ui}, vb{vw, vi};
          Vec su = apply(a.sem, Vec::unit(ub));
          Vec sv = apply(a.sem, Vec::unit(vb));
          for (long n = uw + vw - 1 - v.w_max; n <= uw + vw - 1; ++n) {
            Vec lhs = apply(a.sem, v.product(ub, n, vb));
            Vec rhs = v.product(su, n, sv);
            ++rep.checks;
            if (lhs != rhs) {
              rep.fail("semisimple conjugation fails at u=" + v.name_of(ub) +
                       " n=" + std::to_string(n) + " v=" + v.name_of(vb));
              return rep;
            }
          }
        }
  return rep;
}

/// C2 span data per weight, quotient dimensions, representatives B, and the
/// threshold M (certified only within the cutoff).
struct C2Report {
  int cutoff = 0;
  std::vector<int> c2_dim;    // per weight
  std::vector<int> quot_dim;  // per weight
  struct Rep {
    Vec v;
    int weight;
    Rat alpha;
  };
  std::vector<Rep> B;         // weight >= 1 representatives, deterministic order
  int M = 0;
  bool m_certified = false;

  // per weight: solver whose generators are [B-reps at this weight..., then
  // the C2 spanning vectors], for expressing arbitrary vectors; gen_pairs
  // records which (u,v) produced each C2 generator column.
  std::vector<SpanSolver<Cyclo>> solvers;
  std::vector<std::vector<std::pair<BRef, BRef>>> c2_pairs;
  std::vector<int> rep_count; // how many B-reps lead the solver's generators
};

inline std::vector<Cyclo> vec_to_cyclo_coords(const Vec& v, int w, int d) {
  std::vector<Cyclo> out(static_cast<size_t>(d));
  for (const auto& [b, s] : v.c) {
    if (b.first != w)
      throw TwistError("PreconditionViolated", "inhomogeneous vector in rank computation");
    out[static_cast<size_t>(b.second)] = s.cyclo_value();
  }
  return out;
}

/// Spans {u(-2)v} weightwise, extracts quotient dimensions and homogeneous
/// S-eigenvector representatives (vacuum removed), and determines M.
inline C2Report compute_c2(const VOAData& v, const AutomorphismData& a, int cutoff) {
  if (cutoff > v.w_max)
    throw TwistError("CutoffTooSmall",
                     "C2 cutoff " + std::to_string(cutoff) + " exceeds table cutoff");
  C2Report rep;
  rep.cutoff = cutoff;
  rep.c2_dim.resize(static_cast<size_t>(cutoff) + 1, 0);
  rep.quot_dim.resize(static_cast<size_t>(cutoff) + 1, 0);
  rep.c2_pairs.resize(static_cast<size_t>(cutoff) + 1);
  rep.rep_count.resize(static_cast<size_t>(cutoff) + 1, 0);

  for (int w = 0; w <= cutoff; ++w) {
    int d = v.dim(w);
    // C2 generators at this weight: u(-2)v with wt u + wt v + 1 = w
    RowSpan<Cyclo> c2span(d);
    std::vector<std::pair<BRef, BRef>> pairs;
    std::vector<Vec> gens;
    for (int uw = 0; uw <= w - 1; ++uw) {
      int vw = w - 1 - uw;
      if (vw < 0 || vw > v.w_max) continue;
      for (int ui = 0; ui < v.dim(uw); ++ui)
        for (int vi = 0; vi < v.dim(vw); ++vi) {
          BRef ub{uw, ui}, vb{vw, vi};
          Vec p = v.product(ub, -2, vb);
          if (p.is_zero()) continue;
          pairs.emplace_back(ub, vb);
          gens.push_back(p);
        }
    }
    for (const Vec& g : gens) c2span.add(vec_to_cyclo_coords(g, w, d));
    rep.c2_dim[static_cast<size_t>(w)] = c2span.rank();
    rep.quot_dim[static_cast<size_t>(w)] = d - c2span.rank();

    // representatives: S-eigenvectors, eigenvalue ascending then index order
    std::vector<C2Report::Rep> reps;
    {
      RowSpan<Cyclo> filled(d);
      for (const Vec& g : gens) filled.add(vec_to_cyclo_coords(g, w, d));
      for (const Rat& alpha : a.PV) {
        for (int i = 0; i < d && filled.rank() < d; ++i) {
          Vec cand = a.project(alpha, Vec::unit({w, i}));
          if (cand.is_zero()) continue;
          if (filled.add(vec_to_cyclo_coords(cand, w, d)))
            reps.push_back({cand, w, alpha});
        }
      }
      if (filled.rank() < d)
        throw TwistError("PreconditionViolated",
                         "eigenvector candidates fail to complete weight " + std::to_string(w));
    }

    // the weight-0 representative is the vacuum; it is not recorded in B
    if (w > 0)
      for (auto& r : reps) rep.B.push_back(r);
    rep.rep_count[static_cast<size_t>(w)] = static_cast<int>(reps.size());

    // combination-tracking solver: reps first, then the C2 generators
    SpanSolver<Cyclo> solver(d);
    for (const auto& r : reps) solver.add(vec_to_cyclo_coords(r.v, w, d));
    for (const Vec& g : gens) solver.add(vec_to_cyclo_coords(g, w, d));
    rep.solvers.push_back(std::move(solver));
    rep.c2_pairs[static_cast<size_t>(w)] = std::move(pairs);
  }

  int last_nonzero = -1;
  for (int w = 0; w <= cutoff; ++w)
    if (rep.quot_dim[static_cast<size_t>(w)] > 0) last_nonzero = w;
  rep.M = last_nonzero + 1;
  rep.m_certified = last_nonzero < cutoff;
  return rep;
}

} // namespace twistcalc::voa
