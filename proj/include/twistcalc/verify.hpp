#pragma once

#include <set>

#include "twisted.hpp"

namespace twistcalc::twisted {

using voa::CheckReport;

/// Equality of two assembled series on the overlap of their trusted windows.
inline bool series_agree(const LogSeries<Vec>& a, const LogSeries<Vec>& b,
                         std::string* where = nullptr) {
  RatExt f = logcalc::ext_min(a.frontier(), b.frontier());
  std::set<std::pair<Exponent, int>> keys;
  for (const auto& [key, c] : a.terms())
    if (RatExt(key.first.value()) <= f) keys.insert(key);
  for (const auto& [key, c] : b.terms())
    if (RatExt(key.first.value()) <= f) keys.insert(key);
  for (const auto& key : keys) {
    if (!(a.coeff(key.first, key.second) == b.coeff(key.first, key.second))) {
      if (where)
        *where = "x^" + key.first.str() + " log^" + std::to_string(key.second);
      return false;
    }
  }
  return true;
}

template <typename F>
inline LogSeries<Vec> map_coeffs(const LogSeries<Vec>& s, F&& f) {
  LogSeries<Vec> out(s.log_cap(), s.frontier());
  for (const auto& [key, c] : s.terms()) out.add(key.first, key.second, f(c));
  return out;
}

/// Y_W(1, x) = id: vacuum modes act as the delta at n = -1, k = 0.
inline CheckReport check_identity_property(const VOAData& v, const TwistedModuleData& w, int D) {
  CheckReport rep;
  for (int d2 = 0; d2 <= w.d2_max; ++d2)
    for (int i = 0; i < w.dim(d2); ++i) {
      BRef wb{d2, i};
      for (long n = -D; n <= D; ++n)
        for (int k = 0; k <= w.K; ++k) {
          Rat dres = rat(d2, w.denom) - rat(n + 1);
          if (dres < 0 || dres > w.max_degree()) continue;
          Vec got = w.action(v.vacuum, Exponent::integer(n), k, wb);
          Vec want = (n == -1 && k == 0) ? Vec::unit(wb) : Vec{};
          ++rep.checks;
          if (got != want) {
            rep.fail("vacuum mode (" + std::to_string(n) + "," + std::to_string(k) + ") on " +
                     voa::bref_str(wb));
            return rep;
          }
        }
    }
  return rep;
}

/// Modes of an S-eigenvector of eigenvalue alpha are supported on alpha + Z:
/// probing any other coset in the spectrum must give zero.
inline CheckReport check_sum_index(const VOAData& v, const AutomorphismData& a,
                                   const TwistedModuleData& w, int D) {
  CheckReport rep;
  std::set<Rat> cosets;
  for (const Rat& alpha : a.PV) cosets.insert(alpha - exactalg::rat_floor(alpha));
  for (int uw = 0; uw <= v.w_max; ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui) {
      for (const Rat& alpha : a.PV) {
        Vec ua = a.project(alpha, Vec::unit({uw, ui}));
        if (ua.is_zero()) continue;
        Rat own = alpha - exactalg::rat_floor(alpha);
        for (const Rat& gamma : cosets) {
          if (gamma == own) continue;
          for (long t = -D; t <= D; ++t) {
            Exponent n(gamma, t);
            for (int d2 = 0; d2 <= w.d2_max; ++d2)
              for (int i = 0; i < w.dim(d2); ++i) {
                Rat dres = rat(d2, w.denom) + rat(uw) - n.value() - rat(1);
                if (dres * rat(w.denom) > rat(w.d2_max)) continue;
                for (int k = 0; k <= w.K; ++k) {
                  ++rep.checks;
                  if (!w.act(ua, n, k, Vec::unit({d2, i})).is_zero()) {
                    rep.fail("nonzero mode off the coset: u=" + v.name_of({uw, ui}) +
                             " alpha=" + exactalg::rat_str(alpha) + " n=" + n.str());
                    return rep;
                  }
                }
              }
          }
        }
      }
    }
  return rep;
}

/// The twisted Jacobi identity, verified coefficient by coefficient over a
/// window of exponents. For S-eigencomponents u_alpha, v_beta and integers
/// a, b in -alpha-1+Z, c in -beta-1+Z, log powers k1, k2, the three sides
/// contribute the finite sums below; every tuple whose intermediate degrees
/// fit the tables is evaluated exactly.
inline CheckReport check_twisted_jacobi(const VOAData& v, const AutomorphismData& a,
                                        const TwistedModuleData& w, const BRef& ub,
                                        const BRef& vb, const BRef& wb, int D) {
  CheckReport rep;
  GradedOperator lop = a.S + a.N;
  Rat degw = w.degree(wb);
  Rat dmax = w.max_degree();
  long wtu = ub.first, wtv = vb.first;
  for (const Rat& alpha : a.PV) {
    Vec ua = a.project(alpha, Vec::unit(ub));
    if (ua.is_zero()) continue;
    for (const Rat& beta : a.PV) {
      Vec vbe = a.project(beta, Vec::unit(vb));
      if (vbe.is_zero()) continue;
      for (long av = -D; av <= D; ++av)
        for (long t1 = -D; t1 <= D; ++t1)
          for (long t2 = -D; t2 <= D; ++t2) {
            Exponent b = Exponent::from_value(-alpha - 1 + t1);
            Exponent c = Exponent::from_value(-beta - 1 + t2);
            Rat final_deg = degw + wtu + wtv + av + b.value() + c.value() + 1;
            if (final_deg < 0) continue;  // both sides vanish by grading
            if (final_deg > dmax) continue;
            if (degw + wtv + c.value() > dmax) continue;   // first product
            if (degw + wtu + b.value() > dmax) continue;   // second product
            if (wtu + wtv + av > v.w_max) continue;        // iterate side
            long nd = -av - 1;
            for (int k1 = 0; k1 <= w.K; ++k1)
              for (int k2 = 0; k2 <= w.K; ++k2) {
                // sum_j binom(nd,j)(-1)^j u(nd-j-b-1,k1) v(j-c-1,k2) w
                Vec lhs;
                long j1max = exactalg::rat_floor_long(degw + wtv + c.value());
                for (long j = 0; j <= j1max; ++j) {
                  Rat coef = exactalg::rat_binom(rat(nd), j);
                  if (coef == 0) continue;
                  if (j % 2) coef = -coef;
                  Vec inner = w.act(vbe, Exponent::from_value(rat(j) - c.value() - 1), k2,
                                    Vec::unit(wb));
                  if (inner.is_zero()) continue;
                  Vec t = w.act(ua, Exponent::from_value(rat(nd - j) - b.value() - 1), k1, inner);
                  lhs = lhs + t * Scalar(coef);
                }
                // minus sum_j binom(nd,j)(-1)^{nd-j} v(nd-j-c-1,k2) u(j-b-1,k1) w
                long j2max = exactalg::rat_floor_long(degw + wtu + b.value());
                for (long j = 0; j <= j2max; ++j) {
                  Rat coef = exactalg::rat_binom(rat(nd), j);
                  if (coef == 0) continue;
                  if (((nd - j) % 2 + 2) % 2) coef = -coef;
                  Vec inner = w.act(ua, Exponent::from_value(rat(j) - b.value() - 1), k1,
                                    Vec::unit(wb));
                  if (inner.is_zero()) continue;
                  Vec t = w.act(vbe, Exponent::from_value(rat(nd - j) - c.value() - 1), k2, inner);
                  lhs = lhs - t * Scalar(coef);
                }
                // iterate side: n fixed by the x1 support, insertion
                // (x2+x0)^L x1^{-L} expanded into binomials and nilpotent logs
                Rat nval = -b.value() - alpha - 1;
                long n = exactalg::rat_to_long(nval);
                Vec rhs;
                long jlmax = wtu + wtv + av;
                for (long j = 0; j <= jlmax; ++j) {
                  Vec bju = voa::apply(exactalg::operator_binomial(lop, 0, j), ua);
                  if (bju.is_zero()) continue;
                  for (int i1 = 0; i1 + k1 <= w.K && i1 <= k2; ++i1) {
                    Vec niu = bju;
                    for (int q = 0; q < i1 + k1; ++q) niu = voa::apply(a.N, niu);
                    if (niu.is_zero()) break;
                    Scalar coef1 = Scalar(Rat(1) / (exactalg::rat_factorial(i1) *
                                                    exactalg::rat_factorial(k1)));
                    if (k1 % 2) coef1 = -coef1;
                    for (long l = 0; j + l <= jlmax; ++l) {
                      Rat bl = exactalg::rat_binom(rat(n), l);
                      if (bl == 0) continue;
                      Vec pv = v.product(niu, j + l - av - 1, vbe);
                      if (pv.is_zero()) continue;
                      Exponent n2 = Exponent::from_value(rat(n - l - j) + alpha - c.value() - 1);
                      Vec t = w.act(pv, n2, k2 - i1, Vec::unit(wb));
                      rhs = rhs + t * (coef1 * Scalar(bl));
                    }
                  }
                }
                ++rep.checks;
                if (lhs != rhs) {
                  rep.fail("jacobi mismatch: u=" + v.name_of(ub) + " v=" + v.name_of(vb) +
                           " w=" + voa::bref_str(wb) + " a=" + std::to_string(av) +
                           " b=" + b.str() + " c=" + c.str() + " k1=" + std::to_string(k1) +
                           " k2=" + std::to_string(k2));
                  return rep;
                }
              }
          }
    }
  }
  return rep;
}

/// Log-free Jacobi identity for an S-eigenvector u: both sides built from
/// the k = 0 modes alone, with the (x2/x1)^alpha factor and the insertion
/// (1 + x0/x2)^L on the iterate side.
inline CheckReport check_logfree_jacobi(const VOAData& v, const AutomorphismData& a,
                                        const TwistedModuleData& w, const BRef& ub,
                                        const BRef& vb, const BRef& wb, int D) {
  CheckReport rep;
  GradedOperator lop = a.S + a.N;
  Rat degw = w.degree(wb);
  Rat dmax = w.max_degree();
  long wtu = ub.first, wtv = vb.first;
  Rat alpha = a.alpha_of(Vec::unit(ub));
  for (const Rat& beta : a.PV) {
    Vec vbe = a.project(beta, Vec::unit(vb));
    if (vbe.is_zero()) continue;
    for (long av = -D; av <= D; ++av)
      for (long t1 = -D; t1 <= D; ++t1)
        for (long t2 = -D; t2 <= D; ++t2) {
          Exponent b = Exponent::from_value(-alpha - 1 + t1);
          Exponent c = Exponent::from_value(-beta - 1 + t2);
          Rat final_deg = degw + wtu + wtv + av + b.value() + c.value() + 1;
          if (final_deg < 0 || final_deg > dmax) continue;
          if (degw + wtv + c.value() > dmax) continue;
          if (degw + wtu + b.value() > dmax) continue;
          if (wtu + wtv + av > v.w_max) continue;
          long nd = -av - 1;
          Vec lhs;
          long j1max = exactalg::rat_floor_long(degw + wtv + c.value());
          for (long j = 0; j <= j1max; ++j) {
            Rat coef = exactalg::rat_binom(rat(nd), j);
            if (coef == 0) continue;
            if (j % 2) coef = -coef;
            Vec inner =
                w.act(vbe, Exponent::from_value(rat(j) - c.value() - 1), 0, Vec::unit(wb));
            if (inner.is_zero()) continue;
            lhs = lhs + w.act(Vec::unit(ub), Exponent::from_value(rat(nd - j) - b.value() - 1),
                              0, inner) *
                            Scalar(coef);
          }
          long j2max = exactalg::rat_floor_long(degw + wtu + b.value());
          for (long j = 0; j <= j2max; ++j) {
            Rat coef = exactalg::rat_binom(rat(nd), j);
            if (coef == 0) continue;
            if (((nd - j) % 2 + 2) % 2) coef = -coef;
            Vec inner =
                w.act(Vec::unit(ub), Exponent::from_value(rat(j) - b.value() - 1), 0,
                      Vec::unit(wb));
            if (inner.is_zero()) continue;
            lhs = lhs - w.act(vbe, Exponent::from_value(rat(nd - j) - c.value() - 1), 0, inner) *
                            Scalar(coef);
          }
          long n = exactalg::rat_to_long(-b.value() - alpha - 1);
          Vec rhs;
          long jlmax = wtu + wtv + av;
          for (long j = 0; j <= jlmax; ++j) {
            Vec bju = voa::apply(exactalg::operator_binomial(lop, 0, j), Vec::unit(ub));
            if (bju.is_zero()) continue;
            for (long l = 0; j + l <= jlmax; ++l) {
              Rat bl = exactalg::rat_binom(rat(n), l);
              if (bl == 0) continue;
              Vec pv = v.product(bju, j + l - av - 1, vbe);
              if (pv.is_zero()) continue;
              Exponent n2 = Exponent::from_value(rat(n - l - j) + alpha - c.value() - 1);
              rhs = rhs + w.act(pv, n2, 0, Vec::unit(wb)) * Scalar(bl);
            }
          }
          ++rep.checks;
          if (lhs != rhs) {
            rep.fail("log-free jacobi mismatch: u=" + v.name_of(ub) + " v=" + v.name_of(vb) +
                     " w=" + voa::bref_str(wb) + " a=" + std::to_string(av) + " b=" + b.str() +
                     " c=" + c.str());
            return rep;
          }
        }
  }
  return rep;
}

/// e^{2 pi i x d/dx} Y_W(g u, x) = Y_W(u, x): substituting x -> e^{2 pi i} x
/// into the series of the g-image recovers the original series.
inline CheckReport check_equivariance(const VOAData& v, const AutomorphismData& a,
                                      const TwistedModuleData& w, int wt_cap, int deg_cap2) {
  CheckReport rep;
  for (int uw = 0; uw <= std::min(wt_cap, v.w_max); ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui)
      for (int d2 = 0; d2 <= std::min(deg_cap2, w.d2_max); ++d2)
        for (int i = 0; i < w.dim(d2); ++i) {
          Vec u = Vec::unit({uw, ui}), ww = Vec::unit({d2, i});
          LogSeries<Vec> lhs = twisted_series(w, a, voa::apply(a.g, u), ww).monodromy();
          LogSeries<Vec> rhs = twisted_series(w, a, u, ww);
          ++rep.checks;
          std::string at;
          if (!series_agree(lhs, rhs, &at)) {
            rep.fail("equivariance fails for u=" + v.name_of({uw, ui}) + " w=" +
                     voa::bref_str({d2, i}) + " at " + at);
            return rep;
          }
        }
  return rep;
}

/// Partial monodromy relations: the exponent phase alone implements
/// e^{2 pi i S}, the log translation alone implements e^{2 pi i N}.
inline CheckReport check_partial_relations(const VOAData& v, const AutomorphismData& a,
                                           const TwistedModuleData& w, int wt_cap,
                                           int deg_cap2) {
  CheckReport rep;
  for (int uw = 0; uw <= std::min(wt_cap, v.w_max); ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui)
      for (int d2 = 0; d2 <= std::min(deg_cap2, w.d2_max); ++d2)
        for (int i = 0; i < w.dim(d2); ++i) {
          Vec u = Vec::unit({uw, ui}), ww = Vec::unit({d2, i});
          LogSeries<Vec> s = twisted_series(w, a, u, ww);
          std::string at;
          ++rep.checks;
          if (!series_agree(s.exp_x_dx(-1), twisted_series(w, a, voa::apply(a.sem, u), ww),
                            &at)) {
            rep.fail("semisimple relation fails for u=" + v.name_of({uw, ui}) + " at " + at);
            return rep;
          }
          ++rep.checks;
          if (!series_agree(s.exp_dlog(-1), twisted_series(w, a, voa::apply(a.unip, u), ww),
                            &at)) {
            rep.fail("unipotent relation fails for u=" + v.name_of({uw, ui}) + " at " + at);
            return rep;
          }
        }
  return rep;
}

/// Translation: Y_W(L(-1)u, x) = (d/dx) Y_W(u, x). With `full` false the
/// log-differentiation term is dropped, which must fail whenever genuine
/// log terms are present.
inline CheckReport check_translation(const VOAData& v, const AutomorphismData& a,
                                     const TwistedModuleData& w, bool full, int wt_cap,
                                     int deg_cap2) {
  CheckReport rep;
  for (int uw = 0; uw <= std::min(wt_cap, v.w_max - 1); ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui)
      for (int d2 = 0; d2 <= std::min(deg_cap2, w.d2_max); ++d2)
        for (int i = 0; i < w.dim(d2); ++i) {
          Vec u = Vec::unit({uw, ui}), ww = Vec::unit({d2, i});
          LogSeries<Vec> s = twisted_series(w, a, u, ww);
          LogSeries<Vec> lhs = twisted_series(w, a, v.L(-1, u), ww);
          LogSeries<Vec> rhs = full ? s.full_derivative() : s.partial_x();
          ++rep.checks;
          std::string at;
          if (!series_agree(lhs, rhs, &at)) {
            rep.fail("translation fails for u=" + v.name_of({uw, ui}) + " w=" +
                     voa::bref_str({d2, i}) + " at " + at);
            return rep;
          }
        }
  return rep;
}

/// The logarithmic structure of the series:
///   -d/d(log x) Y_W(u, x)    = Y_W(N u, x)
///   Y_W(x^N u, x)            = (Y_W)_0(u, x)
///   u(n, k)                  = ((-1)^k / k!) (N^k u)(n, 0)
inline CheckReport check_log_structure(const VOAData& v, const AutomorphismData& a,
                                       const TwistedModuleData& w, int wt_cap, int deg_cap2) {
  CheckReport rep;
  for (int uw = 0; uw <= std::min(wt_cap, v.w_max); ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui)
      for (int d2 = 0; d2 <= std::min(deg_cap2, w.d2_max); ++d2)
        for (int i = 0; i < w.dim(d2); ++i) {
          Vec u = Vec::unit({uw, ui}), ww = Vec::unit({d2, i});
          LogSeries<Vec> s = twisted_series(w, a, u, ww);
          std::string at;
          ++rep.checks;
          if (!series_agree(s.partial_log().scaled(Scalar(-1)),
                            twisted_series(w, a, voa::apply(a.N, u), ww), &at)) {
            rep.fail("log derivative fails for u=" + v.name_of({uw, ui}) + " at " + at);
            return rep;
          }
          // x^N u = sum_j (log x)^j N^j u / j!; the cap is doubled because
          // individual terms can sit above K before they cancel
          LogSeries<Vec> lhs(2 * w.K, s.frontier());
          Vec nu = u;
          for (int j = 0; j <= w.K && !nu.is_zero(); ++j) {
            LogSeries<Vec> sj = twisted_series(w, a, nu, ww);
            for (const auto& [key, c] : sj.terms())
              lhs.add(key.first, key.second + j,
                      c * Scalar(Rat(1) / exactalg::rat_factorial(j)));
            nu = voa::apply(a.N, nu);
          }
          ++rep.checks;
          if (!series_agree(lhs, s.set_log_zero(), &at)) {
            rep.fail("log removal fails for u=" + v.name_of({uw, ui}) + " at " + at);
            return rep;
          }
        }
  // mode-level comparison u(n,k) = ((-1)^k/k!) (N^k u)(n,0)
  for (int uw = 0; uw <= std::min(wt_cap, v.w_max); ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui)
      for (int k = 1; k <= w.K; ++k) {
        Vec nku = Vec::unit({uw, ui});
        for (int q = 0; q < k; ++q) nku = voa::apply(a.N, nku);
        Scalar f = Scalar(Rat(1) / exactalg::rat_factorial(k));
        if (k % 2) f = -f;
        for (int d2 = 0; d2 <= std::min(deg_cap2, w.d2_max); ++d2)
          for (int i = 0; i < w.dim(d2); ++i)
            for (const Rat& alpha : a.PV) {
              Vec ua = a.project(alpha, Vec::unit({uw, ui}));
              if (ua.is_zero()) continue;
              for (long t = -2; t <= 2; ++t) {
                Exponent n = Exponent::from_value(alpha + t);
                Rat dres = rat(d2, w.denom) + uw - n.value() - 1;
                if (dres < 0 || dres * w.denom > rat(w.d2_max)) continue;
                ++rep.checks;
                if (w.act(ua, n, k, Vec::unit({d2, i})) !=
                    w.act(a.project(alpha, nku), n, 0, Vec::unit({d2, i})) * f) {
                  rep.fail("mode log relation fails for u=" + v.name_of({uw, ui}) +
                           " n=" + n.str() + " k=" + std::to_string(k));
                  return rep;
                }
              }
            }
      }
  return rep;
}

/// (Y_W)_0(L(-1)u, x) = d/dx (Y_W)_0(u, x) - x^{-1} (Y_W)_0(N u, x).
inline CheckReport check_y0_derivative(const VOAData& v, const AutomorphismData& a,
                                       const TwistedModuleData& w, int wt_cap, int deg_cap2) {
  CheckReport rep;
  for (int uw = 0; uw <= std::min(wt_cap, v.w_max - 1); ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui)
      for (int d2 = 0; d2 <= std::min(deg_cap2, w.d2_max); ++d2)
        for (int i = 0; i < w.dim(d2); ++i) {
          Vec u = Vec::unit({uw, ui}), ww = Vec::unit({d2, i});
          LogSeries<Vec> lhs = twisted_series(w, a, v.L(-1, u), ww).set_log_zero();
          LogSeries<Vec> rhs =
              twisted_series(w, a, u, ww).set_log_zero().partial_x() -
              twisted_series(w, a, voa::apply(a.N, u), ww)
                  .set_log_zero()
                  .shifted(Exponent::integer(-1));
          ++rep.checks;
          std::string at;
          if (!series_agree(lhs, rhs, &at)) {
            rep.fail("log-free derivative fails for u=" + v.name_of({uw, ui}) + " w=" +
                     voa::bref_str({d2, i}) + " at " + at);
            return rep;
          }
        }
  return rep;
}

/// [L(0), Y_W(u, x)] = Y_W(L(0)u, x) + x (d/dx) Y_W(u, x).
inline CheckReport check_virasoro_module(const VOAData& v, const AutomorphismData& a,
                                         const TwistedModuleData& w, int wt_cap,
                                         int deg_cap2) {
  CheckReport rep;
  auto l0 = [&](const Vec& x) { return w.act(v.omega, Exponent::integer(1), 0, x); };
  for (int uw = 0; uw <= std::min(wt_cap, v.w_max); ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui)
      for (int d2 = 0; d2 <= std::min(deg_cap2, w.d2_max); ++d2)
        for (int i = 0; i < w.dim(d2); ++i) {
          Vec u = Vec::unit({uw, ui}), ww = Vec::unit({d2, i});
          LogSeries<Vec> s = twisted_series(w, a, u, ww);
          LogSeries<Vec> lhs = map_coeffs(s, l0) - twisted_series(w, a, u, l0(ww));
          LogSeries<Vec> rhs = twisted_series(w, a, v.L(0, u), ww) +
                               s.full_derivative().shifted(Exponent::integer(1));
          ++rep.checks;
          std::string at;
          if (!series_agree(lhs, rhs, &at)) {
            rep.fail("module Virasoro fails for u=" + v.name_of({uw, ui}) + " w=" +
                     voa::bref_str({d2, i}) + " at " + at);
            return rep;
          }
        }
  return rep;
}

} // namespace twistcalc::twisted
