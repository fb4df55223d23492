#pragma once

#include <memory>

#include "log_series.hpp"
#include "voa.hpp"

namespace twistcalc::twisted {

using exactalg::GradedOperator;
using exactalg::Rat;
using exactalg::rat;
using exactalg::Scalar;
using logcalc::Exponent;
using logcalc::LogSeries;
using logcalc::RatExt;
using voa::AutomorphismData;
using voa::BRef;
using voa::VOAData;
using voa::Vec;

/// Action tables for a twisted module. Degrees are stored scaled by `denom`
/// so half-integer gradings stay integral; the degree of basis slot d is
/// d/denom. Mode exponents are Exponent values; log powers are capped by K.
/// A query whose result degree is negative or off the degree lattice is
/// exactly zero; beyond the cutoff it is an error; otherwise absent entries
/// are zero and a provider closure may fill them lazily.
struct TwistedModuleData {
  int denom = 1;
  int d2_max = 0;                               // scaled degree cutoff
  std::vector<int> dims;                        // per scaled degree
  std::vector<std::vector<std::string>> names;  // per scaled degree
  BRef generator{0, 0};
  int K = 0;
  unsigned conductor = 1;

  std::function<Vec(const BRef&, const Exponent&, int, const BRef&)> provider;
  mutable std::map<std::tuple<BRef, Exponent, int, BRef>, Vec> actions;

  int dim(int d2) const {
    return (d2 >= 0 && d2 <= d2_max) ? dims[static_cast<size_t>(d2)] : 0;
  }
  Rat degree(const BRef& b) const { return rat(b.first, denom); }
  Rat max_degree() const { return rat(d2_max, denom); }

  const std::string& name_of(const BRef& b) const {
    return names[static_cast<size_t>(b.first)][static_cast<size_t>(b.second)];
  }

  void set_action(const BRef& u, const Exponent& n, int k, const BRef& w, Vec result) {
    actions[{u, n, k, w}] = std::move(result);
  }

  /// u(n,k)w for basis u in V and basis w in W.
  Vec action(const BRef& u, const Exponent& n, int k, const BRef& w) const {
    if (k < 0)
      throw TwistError("BadInput", "negative log power");
    if (k > K) return Vec{};
    Rat dres = degree(w) + rat(u.first) - n.value() - rat(1);
    Rat scaled = dres * rat(denom);
    if (!exactalg::rat_is_int(scaled)) return Vec{};  // off the degree lattice
    long d2 = exactalg::rat_to_long(scaled);
    if (d2 < 0) return Vec{};
    if (d2 > d2_max)
      throw TwistError("TableIncomplete",
                       "action " + voa::bref_str(u) + "(" + n.str() + "," + std::to_string(k) +
                           ") on " + voa::bref_str(w) + " has degree beyond the cutoff");
    auto it = actions.find({u, n, k, w});
    if (it != actions.end()) return it->second;
    if (provider) {
      Vec r = provider(u, n, k, w);
      actions.emplace(std::make_tuple(u, n, k, w), r);
      return r;
    }
    return Vec{};
  }

  /// Bilinear extension to vectors of V and W.
  Vec act(const Vec& u, const Exponent& n, int k, const Vec& w) const {
    Vec out;
    for (const auto& [ub, us] : u.c)
      for (const auto& [wb, ws] : w.c) {
        Vec r = action(ub, n, k, wb);
        for (const auto& [rb, rs] : r.c) out.accum(rb, rs * us * ws);
      }
    return out;
  }
};

/// Y_W(u, x) applied to w, assembled as a logarithmic series with the
/// completeness frontier derived from the degree cutoff. Exponent cosets
/// are taken from the S-eigencomponents of u.
inline LogSeries<Vec> twisted_series(const TwistedModuleData& W, const AutomorphismData& A,
                                     const Vec& u, const Vec& w) {
  if (u.is_zero() || w.is_zero()) return LogSeries<Vec>(W.K, RatExt::pos_inf());
  int wt_max = u.c.begin()->first.first;
  for (const auto& [b, s] : u.c) wt_max = std::max(wt_max, b.first);
  int dw_max = w.c.begin()->first.first;
  for (const auto& [b, s] : w.c) dw_max = std::max(dw_max, b.first);
  // terms at exponent e have degree deg w + wt u + e, complete while <= max
  Rat hi = W.max_degree() - rat(wt_max) - rat(dw_max, W.denom);
  LogSeries<Vec> out(W.K, RatExt(hi));
  for (const Rat& alpha : A.PV) {
    Vec ua = A.project(alpha, u);
    if (ua.is_zero()) continue;
    // e = -n-1, n in alpha + Z
    Exponent e_first = Exponent::from_value(-alpha - 1);
    // lowest useful e: degree >= 0 needs e >= -deg w - wt u
    Rat lo = rat(-wt_max) - rat(dw_max, W.denom);
    for (long t = exactalg::rat_floor_long(lo - e_first.value());; ++t) {
      Exponent e = e_first + t;
      if (!(e.value() <= hi)) break;
      Exponent n = Exponent::from_value(-e.value() - 1);
      for (int k = 0; k <= W.K; ++k) {
        Vec c = W.act(ua, n, k, w);
        if (!c.is_zero()) out.add(e, k, c);
      }
    }
  }
  return out;
}

/// The algebra as a module over itself: trivial twist, integer degrees.
inline TwistedModuleData adjoint_module(const VOAData& v) {
  TwistedModuleData W;
  W.denom = 1;
  W.d2_max = v.w_max;
  W.dims = v.dims;
  W.names = v.names;
  W.generator = v.vacuum;
  W.K = 0;
  W.conductor = v.conductor;
  auto vp = std::make_shared<VOAData>(v);
  W.provider = [vp](const BRef& u, const Exponent& n, int k, const BRef& w) -> Vec {
    if (k != 0 || !n.is_integer()) return Vec{};
    return vp->product(u, n.offset, w);
  };
  return W;
}

/// The adjoint module dressed by x^{-N} alone, for a rational nilpotent
/// derivation R with N = tau R: the mode u(n,k) acts as
/// ((-1)^k / k!) tau^k (R^k u)(n). This is NOT a weak exp(R)-twisted module:
/// the dressing reproduces the monodromy, equivariance, and log-structure
/// relations exactly, but d/dx Y(x^{-N}u,x) picks up an extra
/// -x^{-1} Y(x^{-N}Nu,x) against the L(-1) axiom, and the N-insertion on the
/// Jacobi right side has no counterpart on the left. Kept as a negative
/// control: it separates the axioms the log structure implies from the ones
/// it does not.
inline TwistedModuleData naive_log_dressing(const VOAData& v, const GradedOperator& R, int K) {
  TwistedModuleData W;
  W.denom = 1;
  W.d2_max = v.w_max;
  W.dims = v.dims;
  W.names = v.names;
  W.generator = v.vacuum;
  W.K = K;
  W.conductor = v.conductor;
  auto vp = std::make_shared<VOAData>(v);
  auto rp = std::make_shared<GradedOperator>(R);
  W.provider = [vp, rp](const BRef& u, const Exponent& n, int k, const BRef& w) -> Vec {
    if (!n.is_integer()) return Vec{};
    Vec ru = Vec::unit(u);
    for (int i = 0; i < k; ++i) ru = voa::apply(*rp, ru);
    if (ru.is_zero()) return Vec{};
    Rat coef = (k % 2 ? rat(-1) : rat(1)) / exactalg::rat_factorial(k);
    return vp->product(ru, n.offset, Vec::unit(w)) * (Scalar(coef) * Scalar::tau(k));
  };
  return W;
}

} // namespace twistcalc::twisted
