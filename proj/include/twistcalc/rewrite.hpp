#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "twisted.hpp"

namespace twistcalc::rewrite {

using exactalg::Cyclo;
using exactalg::GradedOperator;
using exactalg::Rat;
using exactalg::rat;
using exactalg::rat_binom;
using exactalg::RowSpan;
using exactalg::Scalar;
using logcalc::Exponent;
using twisted::TwistedModuleData;
using voa::AutomorphismData;
using voa::BRef;
using voa::C2Report;
using voa::CheckReport;
using voa::VOAData;
using voa::Vec;

inline long rat_ceil_long(const Rat& r) { return -exactalg::rat_floor_long(-r); }

/// One mode factor u(n, k): u a basis vector of V, n the full exponent with
/// its coset/offset split, k the log power. The paper-side integer in the
/// u(alpha - n) notation is nsub = -offset, since the basis vector's
/// S-eigenvalue equals the coset.
struct ModeFactor {
  BRef vec;
  Exponent n;
  int k = 0;

  friend bool operator<(const ModeFactor& a, const ModeFactor& b) {
    if (a.vec != b.vec) return a.vec < b.vec;
    if (a.n.coset != b.n.coset) return a.n.coset < b.n.coset;
    if (a.n.offset != b.n.offset) return a.n.offset < b.n.offset;
    return a.k < b.k;
  }
  friend bool operator==(const ModeFactor& a, const ModeFactor& b) {
    return a.vec == b.vec && a.n == b.n && a.k == b.k;
  }
};

inline long nsub(const ModeFactor& f) { return -f.n.offset; }

/// Ordered product of mode factors applied to a module generator; f[0] is
/// leftmost (applied last). An empty factor list is the generator itself.
struct ModeMonomial {
  std::vector<ModeFactor> f;
  int gen = 0;

  // filtration degree: sum of the factor weights
  int weight_sum() const {
    int s = 0;
    for (const auto& x : f) s += x.vec.first;
    return s;
  }
  // adjacent pairs violating the ordering condition n_1 >= ... >= n_k
  int disorder() const {
    int d = 0;
    for (size_t j = 0; j + 1 < f.size(); ++j)
      if (nsub(f[j]) < nsub(f[j + 1])) ++d;
    return d;
  }

  friend bool operator<(const ModeMonomial& a, const ModeMonomial& b) {
    if (a.gen != b.gen) return a.gen < b.gen;
    return std::lexicographical_compare(a.f.begin(), a.f.end(), b.f.begin(), b.f.end());
  }
  friend bool operator==(const ModeMonomial& a, const ModeMonomial& b) {
    return a.gen == b.gen && a.f == b.f;
  }

  std::string str() const {
    std::string s;
    for (const auto& x : f) {
      s += voa::bref_str(x.vec) + "(" + x.n.str();
      if (x.k) s += "," + std::to_string(x.k);
      s += ")";
    }
    s += "w";
    if (gen) s += std::to_string(gen);
    return s;
  }
};

/// Finite Scalar combination of mode monomials; the map order makes
/// equality decidable and printing canonical.
struct ModeExpression {
  std::map<ModeMonomial, Scalar> t;

  void accum(const ModeMonomial& m, const Scalar& s) {
    if (s.is_zero()) return;
    auto it = t.find(m);
    if (it == t.end()) {
      t.emplace(m, s);
    } else {
      it->second += s;
      if (it->second.is_zero()) t.erase(it);
    }
  }
  static ModeExpression single(ModeMonomial m, const Scalar& s = Scalar(1)) {
    ModeExpression e;
    e.accum(std::move(m), s);
    return e;
  }

  bool is_zero() const { return t.empty(); }
  size_t size() const { return t.size(); }

  friend ModeExpression operator+(const ModeExpression& a, const ModeExpression& b) {
    ModeExpression out = a;
    for (const auto& [m, s] : b.t) out.accum(m, s);
    return out;
  }
  friend ModeExpression operator*(const ModeExpression& a, const Scalar& s) {
    ModeExpression out;
    for (const auto& [m, c] : a.t) out.accum(m, c * s);
    return out;
  }
  friend ModeExpression operator-(const ModeExpression& a, const ModeExpression& b) {
    return a + b * Scalar(-1);
  }
  bool operator==(const ModeExpression& o) const { return t == o.t; }
  bool operator!=(const ModeExpression& o) const { return !(*this == o); }

  std::string str() const {
    if (t.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : t) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")" + m.str();
    }
    return s;
  }
};

/// Applies a monomial's factors right to left to a target vector.
inline Vec eval_on(const TwistedModuleData& w, const ModeMonomial& m, Vec target) {
  for (auto it = m.f.rbegin(); it != m.f.rend(); ++it)
    target = w.act(Vec::unit(it->vec), it->n, it->k, target);
  return target;
}

inline Vec eval_on(const TwistedModuleData& w, const ModeExpression& e, const Vec& target) {
  Vec out;
  for (const auto& [m, s] : e.t) out = out + eval_on(w, m, target) * s;
  return out;
}

/// Evaluation against the module generator (gen index ignored for
/// single-generator modules).
inline Vec eval(const TwistedModuleData& w, const ModeExpression& e) {
  return eval_on(w, e, Vec::unit(w.generator));
}

/// S-eigenvalue of a product u(n)v of eigenvectors with eigenvalues in [0,1).
inline Rat s_of(const Rat& alpha, const Rat& beta) {
  Rat s = alpha + beta;
  return s < 1 ? s : s - 1;
}

/// Degree bound for the vectors an expression will be applied to. The
/// infinite tails of the two-sided expansions truncate because an inner
/// factor u(n) kills every vector of degree <= deg_cap once
/// n > wt u + deg_cap - 1.
struct TruncationContext {
  Rat deg_cap;
};

/// [u(alpha + m), v(beta + n)] as a sum of single modes
/// ((binom(m + L, j) u)(j) v)(alpha + beta + m + n - j). Finite: the inner
/// product weight drops below zero once j exceeds wt u + wt v - 1.
inline ModeExpression commutator_expand(const VOAData& v, const AutomorphismData& a,
                                        const BRef& ub, long m, const BRef& vb, long n) {
  Rat alpha = a.alpha_of(Vec::unit(ub));
  Rat beta = a.alpha_of(Vec::unit(vb));
  GradedOperator lop = a.S + a.N;
  ModeExpression out;
  for (long j = 0; ub.first + vb.first - j - 1 >= 0; ++j) {
    Vec bu = voa::apply(exactalg::operator_binomial(lop, m, j), Vec::unit(ub));
    if (bu.is_zero()) continue;
    Vec inner = v.product(bu, j, Vec::unit(vb));
    Rat mode = alpha + beta + rat(m + n - j);
    for (const auto& [rb, rs] : inner.c) {
      ModeMonomial mono;
      mono.f.push_back({rb, Exponent::from_value(mode), 0});
      out.accum(mono, rs);
    }
  }
  return out;
}

/// (u(m)v)(s(alpha,beta) + n) re-expressed in modes of u and v plus
/// lower-weight products:
///   -sum_{j>=1} ((binom(L,j)u)(m+j)v)(s+n-j)
///   +sum_{j>=0} (-1)^j binom(m,j) u(alpha+m-j) v(s-alpha+n+j)
///   +sum_{j>=0} (-1)^{m-j+1} binom(m,j) v(s-alpha+m+n-j) u(alpha+j).
/// The two-sided sums are truncated by the context's degree cap.
inline ModeExpression c2_mode_expand(const VOAData& v, const AutomorphismData& a,
                                     const BRef& ub, long m, const BRef& vb, long n,
                                     const TruncationContext& tc) {
  Rat alpha = a.alpha_of(Vec::unit(ub));
  Rat beta = a.alpha_of(Vec::unit(vb));
  Rat s = s_of(alpha, beta);
  GradedOperator lop = a.S + a.N;
  ModeExpression out;

  for (long j = 1; ub.first + vb.first - m - j - 1 >= 0; ++j) {
    Vec bu = voa::apply(exactalg::operator_binomial(lop, 0, j), Vec::unit(ub));
    if (bu.is_zero()) continue;
    Vec inner = v.product(bu, m + j, Vec::unit(vb));
    Rat mode = s + rat(n - j);
    for (const auto& [rb, rs] : inner.c) {
      ModeMonomial mono;
      mono.f.push_back({rb, Exponent::from_value(mode), 0});
      out.accum(mono, rs * Scalar(-1));
    }
  }

  for (long j = 0;; ++j) {
    Rat innerval = s - alpha + rat(n + j);
    if (innerval > rat(vb.first) + tc.deg_cap - 1) break;
    Rat c = rat_binom(rat(m), j);
    if (j % 2) c = -c;
    if (c == 0) continue;
    ModeMonomial mono;
    mono.f.push_back({ub, Exponent::from_value(alpha + rat(m - j)), 0});
    mono.f.push_back({vb, Exponent::from_value(innerval), 0});
    out.accum(mono, Scalar(c));
  }

  for (long j = 0;; ++j) {
    Rat innerval = alpha + rat(j);
    if (innerval > rat(ub.first) + tc.deg_cap - 1) break;
    Rat c = rat_binom(rat(m), j);
    if (((m - j + 1) % 2 + 2) % 2 == 1) c = -c;
    if (c == 0) continue;
    ModeMonomial mono;
    mono.f.push_back({vb, Exponent::from_value(s - alpha + rat(m + n - j)), 0});
    mono.f.push_back({ub, Exponent::from_value(innerval), 0});
    out.accum(mono, Scalar(c));
  }
  return out;
}

/// u(n - j, 0) = sum_i v_i(n, 0) with v_i the scaled L(-1)^j N^p u. The
/// coefficient of N^p collects (-1/(n-j+1))^{k_j} ... (-1/n)^{k_1} over
/// compositions k_1 + ... + k_j = p + j with every k_t >= 1; the sum is
/// finite because N is nilpotent.
inline ModeExpression lower_mode_rewrite(const VOAData& v, const AutomorphismData& a,
                                         const Vec& u, const Exponent& n, long j) {
  if (n.is_integer() && n.offset >= 0)
    throw TwistError("InvalidExponent", "lower-mode rewrite needs n outside Z_{>=0}");
  if (j < 1) throw TwistError("BadInput", "lower-mode rewrite needs j >= 1");
  size_t cap = static_cast<size_t>(a.K);
  std::vector<Rat> poly{Rat(1)};
  for (long t = 1; t <= j; ++t) {
    Rat ct = Rat(-1) / (n.value() - rat(j - t));
    std::vector<Rat> next(std::min(poly.size() + cap, cap + 1), Rat(0));
    for (size_t d = 0; d < poly.size(); ++d) {
      Rat pw = ct;
      for (size_t i = 0; d + i < next.size(); ++i) {
        next[d + i] += poly[d] * pw;
        pw *= ct;
      }
    }
    poly = std::move(next);
  }
  Vec total;
  Vec nu = u;
  for (size_t p = 0; p <= cap && !nu.is_zero(); ++p) {
    if (p > 0) nu = voa::apply(a.N, nu);
    if (p < poly.size() && poly[p] != 0 && !nu.is_zero()) {
      Vec w = nu;
      for (long r = 0; r < j; ++r) w = v.L(-1, w);
      total = total + w * Scalar(poly[p]);
    }
  }
  ModeExpression out;
  for (const auto& [rb, rs] : total.c) {
    ModeMonomial mono;
    mono.f.push_back({rb, n, 0});
    out.accum(mono, rs);
  }
  return out;
}

// ---------------------------------------------------------------------------
// normal ordering

/// Series in x with vector coefficients, keyed by the exponent value.
using CosetSeries = std::map<Rat, Vec>;

inline void series_accum(CosetSeries& s, const Rat& e, const Vec& v, const Scalar& c) {
  if (v.is_zero() || c.is_zero()) return;
  auto it = s.find(e);
  if (it == s.end()) {
    Vec scaled = v * c;
    if (!scaled.is_zero()) s.emplace(e, std::move(scaled));
  } else {
    it->second = it->second + v * c;
    if (it->second.is_zero()) s.erase(it);
  }
}

/// Y_0(u, x) w, complete for exponents <= cap. Throws when the degree
/// cutoff cannot cover the requested window.
inline CosetSeries y0_on(const TwistedModuleData& w, const AutomorphismData& a, const Vec& u,
                         const Vec& target, const Rat& cap) {
  CosetSeries out;
  for (const Rat& alpha : a.PV) {
    Vec ua = a.project(alpha, u);
    if (ua.is_zero()) continue;
    for (const auto& [ub, us] : ua.c) {
      for (const auto& [wb, ws] : target.c) {
        Rat room = w.max_degree() - rat(ub.first) - w.degree(wb);
        if (cap > room)
          throw TwistError("TableIncomplete", "normal-order window exceeds the degree cutoff");
        // modes n = alpha + t with exponent e = -n-1 in [result deg >= 0, cap]
        long t_lo = rat_ceil_long(-cap - 1 - alpha);
        long t_hi = exactalg::rat_floor_long(w.degree(wb) + rat(ub.first) - 1 - alpha);
        for (long t = t_lo; t <= t_hi; ++t) {
          Exponent n(alpha, t);
          Vec r = w.action(ub, n, 0, wb);
          if (r.is_zero()) continue;
          series_accum(out, -n.value() - 1, r, us * ws);
        }
      }
    }
  }
  return out;
}

/// The singular part Y_0^-(u, x) w: modes with Re(n) >= 0 only. Always a
/// finite sum by lower truncation; no window is needed.
inline CosetSeries y0_minus_on(const TwistedModuleData& w, const AutomorphismData& a,
                               const Vec& u, const Vec& target) {
  CosetSeries out;
  for (const Rat& alpha : a.PV) {
    Vec ua = a.project(alpha, u);
    if (ua.is_zero()) continue;
    for (const auto& [ub, us] : ua.c) {
      for (const auto& [wb, ws] : target.c) {
        long t_hi = exactalg::rat_floor_long(w.degree(wb) + rat(ub.first) - 1 - alpha);
        for (long t = 0; t <= t_hi; ++t) {
          Exponent n(alpha, t);
          Vec r = w.action(ub, n, 0, wb);
          if (r.is_zero()) continue;
          series_accum(out, -n.value() - 1, r, us * ws);
        }
      }
    }
  }
  return out;
}

/// Nested normal ordering :Y_0(u_i,x) ... Y_0(u_{k},x): applied to target,
/// complete for exponents <= cap. Recursion follows the nesting: the
/// regular part multiplies the inner series, the singular part acts first.
inline CosetSeries nested_normal_order_on(const TwistedModuleData& w, const AutomorphismData& a,
                                          const std::vector<Vec>& us, size_t i,
                                          const Vec& target, const Rat& cap) {
  if (target.is_zero()) return {};
  if (i == us.size()) {
    CosetSeries s;
    s.emplace(Rat(0), target);
    return s;
  }
  CosetSeries out;
  CosetSeries tail = nested_normal_order_on(w, a, us, i + 1, target, cap + 1);
  for (const Rat& alpha : a.PV) {
    Vec ua = a.project(alpha, us[i]);
    if (ua.is_zero()) continue;
    for (const auto& [e1, vec1] : tail) {
      // regular modes n = alpha + t, t <= -1, with e1 - n - 1 <= cap
      long t_hi = -1;
      long t_lo = rat_ceil_long(e1 - cap - 1 - alpha);
      for (long t = t_lo; t <= t_hi; ++t) {
        Exponent n(alpha, t);
        Vec r = w.act(ua, n, 0, vec1);
        if (r.is_zero()) continue;
        Rat e = e1 - n.value() - 1;
        if (e > cap) continue;
        series_accum(out, e, r, Scalar(1));
      }
    }
  }
  CosetSeries minus = y0_minus_on(w, a, us[i], target);
  for (const auto& [e2, vec2] : minus) {
    CosetSeries sub = nested_normal_order_on(w, a, us, i + 1, vec2, cap - e2);
    for (const auto& [e3, vec3] : sub) {
      if (e2 + e3 > cap) continue;
      series_accum(out, e2 + e3, vec3, Scalar(1));
    }
  }
  return out;
}

/// Right side of the multi normal order identity applied to target:
/// sum over (j_1..j_{k-1}) of x^{-sum j} Y_0((binom(L,j_1)u_1)(-1+j_1)
/// ... u_k, x).
inline CosetSeries multi_normal_order_formula_on(const VOAData& v, const AutomorphismData& a,
                                                 const TwistedModuleData& w,
                                                 const std::vector<BRef>& us, const Vec& target,
                                                 const Rat& cap) {
  GradedOperator lop = a.S + a.N;
  CosetSeries out;
  int wsum = 0;
  for (const auto& ub : us) wsum += ub.first;
  // enumerate tuples by total shift; nested product built right to left
  std::vector<long> js(us.size() > 0 ? us.size() - 1 : 0, 0);
  std::function<void(size_t, long)> rec = [&](size_t idx, long jsum) {
    if (idx == js.size()) {
      Vec inner = Vec::unit(us.back());
      for (size_t r = js.size(); r-- > 0;) {
        Vec bu = voa::apply(exactalg::operator_binomial(lop, 0, js[r]), Vec::unit(us[r]));
        inner = v.product(bu, -1 + js[r], inner);
        if (inner.is_zero()) return;
      }
      CosetSeries ser = y0_on(w, a, inner, target, cap + rat(jsum));
      for (const auto& [e, vec] : ser) {
        if (e - jsum > cap) continue;
        series_accum(out, e - jsum, vec, Scalar(1));
      }
      return;
    }
    for (long j = 0; jsum + j <= wsum; ++j) {
      js[idx] = j;
      rec(idx + 1, jsum + j);
    }
  };
  if (us.empty()) return out;
  rec(0, 0);
  return out;
}

/// Compares the direct nested normal ordering against the iterated
/// (-1+j)-product formula on a window of exponents.
inline CheckReport check_normal_order(const VOAData& v, const AutomorphismData& a,
                                      const TwistedModuleData& w, const std::vector<BRef>& us,
                                      const Vec& target, const Rat& cap) {
  CheckReport rep;
  std::vector<Vec> uvecs;
  for (const auto& ub : us) uvecs.push_back(Vec::unit(ub));
  CosetSeries direct = nested_normal_order_on(w, a, uvecs, 0, target, cap);
  CosetSeries formula = multi_normal_order_formula_on(v, a, w, us, target, cap);
  std::set<Rat> keys;
  for (const auto& [e, vec] : direct) keys.insert(e);
  for (const auto& [e, vec] : formula) keys.insert(e);
  for (const Rat& e : keys) {
    if (e > cap) continue;
    Vec dl = direct.count(e) ? direct.at(e) : Vec{};
    Vec fr = formula.count(e) ? formula.at(e) : Vec{};
    ++rep.checks;
    if (dl != fr) {
      rep.fail("normal order mismatch at exponent " + exactalg::rat_str(e) + ": direct " +
               dl.str() + " vs formula " + fr.str());
      return rep;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// the repeats lemma

/// Output of the repeats reduction, classified per the lemma: lower holds
/// monomials whose factor weights sum to at most s - 1, shifted holds
/// full-length monomials with some n_i >= N + 1.
struct RepeatsParts {
  ModeExpression lower;
  ModeExpression shifted;
  ModeExpression combined() const { return lower + shifted; }
};

namespace detail {

/// sigma-term enumeration for one sign pattern: ops hold (vector, coset,
/// weight) in operator order; ts collects the subtracted integers. Minus
/// block entries are bounded through the running degree cap; plus block
/// entries are compositions of what remains.
struct SigmaEnum {
  const std::vector<std::tuple<BRef, Rat, int>>* ops = nullptr;
  size_t plus_count = 0;
  long total = 0;
  std::vector<long> ts;
  std::vector<std::vector<long>> out;

  void run(const Rat& deg_cap) {
    ts.assign(ops->size(), 0);
    minus_rec(ops->size(), deg_cap);
  }

  void minus_rec(size_t pos, Rat d) {
    if (pos == plus_count) {
      long rem = total;
      for (size_t r = plus_count; r < ops->size(); ++r) rem -= ts[r];
      plus_rec(plus_count, rem);
      return;
    }
    --pos;
    const auto& [vec, alpha, wt] = (*ops)[pos];
    (void)vec;
    long t_lo = rat_ceil_long(alpha - rat(wt) - d + 1);
    for (long t = t_lo; t <= 0; ++t) {
      ts[pos] = t;
      minus_rec(pos, d + rat(wt) - alpha + rat(t) - 1);
    }
  }

  void plus_rec(size_t pos, long rem) {
    if (pos == 0) {
      if (rem == 0) out.push_back(ts);
      return;
    }
    --pos;
    long reserve = static_cast<long>(pos); // each earlier plus slot needs >= 1
    for (long t = 1; rem - t >= reserve; ++t) {
      ts[pos] = t;
      plus_rec(pos, rem - t);
    }
  }
};

} // namespace detail

/// Rewrites u_1(alpha_1 - N) ... u_k(alpha_k - N) through the residue
/// extraction of the multi normal order identity. Requires k >= M and all
/// factors in V_+; the j = 0 product must land in C_2(V), which is the
/// lemma's premise for weights >= M. N <= 0 runs the reversed-order
/// variant. The result is exact on vectors of degree <= tc.deg_cap.
inline RepeatsParts repeats_reduce(const VOAData& v, const AutomorphismData& a,
                                   const C2Report& c2, const std::vector<BRef>& us, long N,
                                   int M, const TruncationContext& tc) {
  size_t k = us.size();
  if (static_cast<int>(k) < M)
    throw TwistError("PreconditionViolated", "repeats lemma needs at least M factors");
  std::vector<Rat> alphas;
  int s = 0;
  for (const auto& ub : us) {
    if (ub.first < 1)
      throw TwistError("PreconditionViolated", "repeats lemma factors must lie in V_+");
    alphas.push_back(a.alpha_of(Vec::unit(ub)));
    s += ub.first;
  }
  if (s > v.w_max || s > c2.cutoff)
    throw TwistError("CutoffTooSmall", "repeated product weight exceeds the table cutoff");
  GradedOperator lop = a.S + a.N;
  RepeatsParts parts;
  Rat asum(0);
  for (const Rat& al : alphas) asum += al;

  // formula side under Res_x x^{asum - kN + k - 1}: mode value q = P - sum j
  Rat pexp = asum + rat(-static_cast<long>(k) * N + static_cast<long>(k) - 1);
  std::vector<long> js(k - 1, 0);
  std::function<void(size_t, long)> rec = [&](size_t idx, long jsum) {
    if (idx == js.size()) {
      Vec inner = Vec::unit(us.back());
      for (size_t r = js.size(); r-- > 0;) {
        Vec bu = voa::apply(exactalg::operator_binomial(lop, 0, js[r]), Vec::unit(us[r]));
        inner = v.product(bu, -1 + js[r], inner);
        if (inner.is_zero()) return;
      }
      Rat q = pexp - rat(jsum);
      if (jsum == 0) {
        // weight s >= M forces inner into C_2(V); expand each writer pair
        const auto& solver = c2.solvers[static_cast<size_t>(s)];
        auto coeffs = solver.express(voa::vec_to_cyclo_coords(inner, s, v.dim(s)));
        if (!coeffs)
          throw TwistError("PreconditionViolated", "repeated product escapes the C2 span");
        int reps = c2.rep_count[static_cast<size_t>(s)];
        for (int r = 0; r < reps; ++r)
          if (!(*coeffs)[static_cast<size_t>(r)].is_zero())
            throw TwistError("PreconditionViolated",
                             "repeated product has a C2 quotient component at weight " +
                                 std::to_string(s));
        const auto& pairs = c2.c2_pairs[static_cast<size_t>(s)];
        for (size_t r = 0; r < pairs.size(); ++r) {
          Cyclo mu = (*coeffs)[static_cast<size_t>(reps) + r];
          if (mu.is_zero()) continue;
          const auto& [ar, cr] = pairs[r];
          Rat sg = s_of(a.alpha_of(Vec::unit(ar)), a.alpha_of(Vec::unit(cr)));
          Rat noff = q - sg;
          if (!exactalg::rat_is_int(noff))
            throw TwistError("PreconditionViolated", "mode exits the coset lattice");
          ModeExpression ex = c2_mode_expand(v, a, ar, -2, cr, exactalg::rat_to_long(noff), tc);
          parts.lower = parts.lower + ex * Scalar(mu);
        }
      } else {
        for (const auto& [rb, rs] : inner.c) {
          ModeMonomial mono;
          mono.f.push_back({rb, Exponent::from_value(q), 0});
          parts.lower.accum(mono, rs);
        }
      }
      return;
    }
    for (long j = 0; jsum + j <= s; ++j) {
      js[idx] = j;
      rec(idx + 1, jsum + j);
    }
  };
  rec(0, 0);

  // sigma terms: every +/- interleaving of the normal ordering except the
  // one containing the target. For N <= 0 the factor list is reversed and
  // the target is the all-singular tuple.
  bool pos_branch = N > 0;
  std::vector<size_t> order(k);
  for (size_t i = 0; i < k; ++i) order[i] = pos_branch ? i : k - 1 - i;

  for (unsigned long mask = 0; mask < (1UL << k); ++mask) {
    // bit r set: factor order[r] is taken with its regular (creation) part
    std::vector<size_t> plus_idx, minus_idx;
    for (size_t r = 0; r < k; ++r)
      if (mask & (1UL << r))
        plus_idx.push_back(order[r]);
      else
        minus_idx.push_back(order[r]);
    std::reverse(minus_idx.begin(), minus_idx.end());
    std::vector<std::tuple<BRef, Rat, int>> ops;
    for (size_t i : plus_idx) ops.emplace_back(us[i], alphas[i], us[i].first);
    for (size_t i : minus_idx) ops.emplace_back(us[i], alphas[i], us[i].first);

    detail::SigmaEnum en;
    en.ops = &ops;
    en.plus_count = plus_idx.size();
    en.total = static_cast<long>(k) * N;
    en.run(tc.deg_cap);

    bool target_pattern = pos_branch ? (en.plus_count == k) : (en.plus_count == 0);
    for (const auto& ts : en.out) {
      bool is_target = target_pattern;
      if (is_target)
        for (long t : ts)
          if (t != N) is_target = false;
      if (is_target) continue;
      ModeMonomial mono;
      long tmax = ts.empty() ? 0 : ts[0];
      for (size_t r = 0; r < ops.size(); ++r) {
        const auto& [vec, alpha, wt] = ops[r];
        (void)wt;
        mono.f.push_back({vec, Exponent::from_value(alpha - rat(ts[r])), 0});
        tmax = std::max(tmax, ts[r]);
      }
      if (tmax < N + 1)
        throw TwistError("PreconditionViolated", "sigma term misses the shifted filtration");
      parts.shifted.accum(mono, Scalar(-1));
    }
  }
  return parts;
}

// ---------------------------------------------------------------------------
// the spanning-set normalizer

struct TraceStep {
  int node_s = 0;   // filtration level of the enclosing induction node
  long node_n = 0;  // repeat level of the enclosing induction node
  std::string rule; // expand | c2 | logpow | swap | drop | repeats | insert | descend
  std::string detail;
};

struct SpanningCertificate {
  long L = 0;
  int M = 0;
  long N = 0;
  ModeExpression normal;
  std::vector<TraceStep> trace;
  long steps = 0;
};

namespace detail {

struct Normalizer {
  const VOAData& v;
  const AutomorphismData& a;
  const TwistedModuleData& w;
  const C2Report& c2;
  long L;
  long N;
  long budget;
  SpanningCertificate* cert;
  TruncationContext tc;
  std::set<BRef> bset;
  std::map<int, std::vector<BRef>> reps_by_weight;

  void step(int s, long nl, const std::string& rule, const std::string& detail_) {
    if (++cert->steps > budget)
      throw TwistError("NonTerminatingBudget",
                       "rewriting exceeded the step budget of " + std::to_string(budget));
    cert->trace.push_back({s, nl, rule, detail_});
  }

  bool in_b(const BRef& b) const { return bset.count(b) > 0; }

  // repeat-condition violation: leftmost run of > M equal nsub values <= nl
  std::optional<std::pair<size_t, size_t>> violation(const ModeMonomial& m, long nl) const {
    size_t i = 0;
    while (i < m.f.size()) {
      size_t j = i + 1;
      while (j < m.f.size() && nsub(m.f[j]) == nsub(m.f[i])) ++j;
      if (nsub(m.f[i]) <= nl && j - i > static_cast<size_t>(c2.M))
        return std::make_pair(i, j - i);
      i = j;
    }
    return std::nullopt;
  }

  bool normal_form(const ModeMonomial& m, long nl) const {
    for (const auto& fct : m.f)
      if (fct.k != 0 || !in_b(fct.vec) || nsub(fct) <= L) return false;
    if (m.disorder() > 0) return false;
    return !violation(m, nl).has_value();
  }

  // rules 1-4: log powers out, factors into B, C2 parts expanded, modes
  // sorted, annihilating tails dropped. Repeat violations are untouched.
  ModeExpression base_pass(const ModeExpression& in, long nl) {
    ModeExpression out;
    std::vector<std::pair<ModeMonomial, Scalar>> work(in.t.begin(), in.t.end());
    while (!work.empty()) {
      auto [mono, coef] = work.back();
      work.pop_back();
      if (coef.is_zero()) continue;
      int s = mono.weight_sum();

      // rule 0: log powers reduce through u(n,k) = ((-1)^k/k!)(N^k u)(n,0)
      size_t bad = mono.f.size();
      for (size_t i = 0; i < mono.f.size(); ++i)
        if (mono.f[i].k != 0) {
          bad = i;
          break;
        }
      if (bad < mono.f.size()) {
        const ModeFactor fct = mono.f[bad];
        Vec nu = Vec::unit(fct.vec);
        for (int r = 0; r < fct.k; ++r) nu = voa::apply(a.N, nu);
        Rat cf = Rat((fct.k % 2) ? -1 : 1) / exactalg::rat_factorial(fct.k);
        step(s, nl, "logpow", mono.str());
        for (const auto& [rb, rs] : nu.c) {
          ModeMonomial next = mono;
          next.f[bad] = {rb, fct.n, 0};
          work.emplace_back(next, coef * rs * Scalar(cf));
        }
        continue;
      }

      // rule 1+2: first factor outside B expands into B, C2 and vacuum parts
      for (size_t i = 0; i < mono.f.size(); ++i)
        if (!in_b(mono.f[i].vec)) {
          bad = i;
          break;
        }
      if (bad < mono.f.size()) {
        const ModeFactor fct = mono.f[bad];
        int fw = fct.vec.first;
        if (fw == 0) {
          // identity property: 1(-1) is the identity, all other modes vanish
          step(s, nl, "expand", mono.str() + " vacuum factor");
          if (fct.n.is_integer() && fct.n.offset == -1) {
            ModeMonomial next = mono;
            next.f.erase(next.f.begin() + static_cast<long>(bad));
            work.emplace_back(next, coef);
          }
          continue;
        }
        if (fw > c2.cutoff)
          throw TwistError("CutoffTooSmall", "factor weight beyond the C2 table");
        auto coeffs = c2.solvers[static_cast<size_t>(fw)].express(
            voa::vec_to_cyclo_coords(Vec::unit(fct.vec), fw, v.dim(fw)));
        if (!coeffs)
          throw TwistError("PreconditionViolated", "factor escapes the weight block span");
        step(s, nl, "expand", mono.str());
        int reps = c2.rep_count[static_cast<size_t>(fw)];
        const auto& wreps = reps_by_weight[fw];
        for (int r = 0; r < reps; ++r) {
          Cyclo lam = (*coeffs)[static_cast<size_t>(r)];
          if (lam.is_zero()) continue;
          ModeMonomial next = mono;
          next.f[bad].vec = wreps[static_cast<size_t>(r)];
          work.emplace_back(next, coef * Scalar(lam));
        }
        const auto& pairs = c2.c2_pairs[static_cast<size_t>(fw)];
        for (size_t r = 0; r < pairs.size(); ++r) {
          Cyclo mu = (*coeffs)[static_cast<size_t>(reps) + r];
          if (mu.is_zero()) continue;
          const auto& [ar, cr] = pairs[r];
          Rat sg = s_of(a.alpha_of(Vec::unit(ar)), a.alpha_of(Vec::unit(cr)));
          Rat noff = fct.n.value() - sg;
          if (!exactalg::rat_is_int(noff))
            throw TwistError("PreconditionViolated", "mode exits the coset lattice");
          step(s, nl, "c2", voa::bref_str(ar) + "(-2)" + voa::bref_str(cr));
          ModeExpression ex =
              c2_mode_expand(v, a, ar, -2, cr, exactalg::rat_to_long(noff), tc);
          for (const auto& [xm, xs] : ex.t) {
            ModeMonomial next;
            next.gen = mono.gen;
            next.f.assign(mono.f.begin(), mono.f.begin() + static_cast<long>(bad));
            next.f.insert(next.f.end(), xm.f.begin(), xm.f.end());
            next.f.insert(next.f.end(), mono.f.begin() + static_cast<long>(bad) + 1,
                          mono.f.end());
            work.emplace_back(next, coef * Scalar(mu) * xs);
          }
        }
        continue;
      }

      // rule 4 first when the tail annihilates outright
      if (!mono.f.empty() && nsub(mono.f.back()) <= L) {
        step(s, nl, "drop", mono.str());
        continue;
      }

      // rule 3: leftmost adjacent inversion swaps through the commutator
      size_t inv = mono.f.size();
      for (size_t i = 0; i + 1 < mono.f.size(); ++i)
        if (nsub(mono.f[i]) < nsub(mono.f[i + 1])) {
          inv = i;
          break;
        }
      if (inv < mono.f.size()) {
        const ModeFactor fu = mono.f[inv];
        const ModeFactor fv = mono.f[inv + 1];
        step(s, nl, "swap", mono.str() + " at " + std::to_string(inv));
        ModeMonomial swapped = mono;
        std::swap(swapped.f[inv], swapped.f[inv + 1]);
        work.emplace_back(swapped, coef);
        ModeExpression comm =
            commutator_expand(v, a, fu.vec, fu.n.offset, fv.vec, fv.n.offset);
        for (const auto& [xm, xs] : comm.t) {
          ModeMonomial next;
          next.gen = mono.gen;
          next.f.assign(mono.f.begin(), mono.f.begin() + static_cast<long>(inv));
          next.f.insert(next.f.end(), xm.f.begin(), xm.f.end());
          next.f.insert(next.f.end(), mono.f.begin() + static_cast<long>(inv) + 2,
                        mono.f.end());
          work.emplace_back(next, coef * xs);
        }
        continue;
      }

      out.accum(mono, coef);
    }
    return out;
  }

  ModeExpression normalize(const ModeExpression& in, long nl, int depth) {
    if (in.t.empty()) return {};
    if (nl == L) return base_pass(in, nl);
    int smax = 0;
    for (const auto& [m, c] : in.t) smax = std::max(smax, m.weight_sum());
    step(smax, nl, "descend", "level " + std::to_string(nl - 1));
    ModeExpression cur = normalize(in, nl - 1, depth + 1);

    ModeExpression out;
    std::vector<std::pair<ModeMonomial, Scalar>> work(cur.t.begin(), cur.t.end());
    while (!work.empty()) {
      auto [mono, coef] = work.back();
      work.pop_back();
      if (coef.is_zero()) continue;
      auto viol = violation(mono, nl);
      if (!viol) {
        out.accum(mono, coef);
        continue;
      }
      int s = mono.weight_sum();
      auto [p, m] = *viol;
      if (p == 0) {
        // head run: the repeats lemma replaces the first m factors
        long runv = nsub(mono.f[0]);
        std::vector<BRef> run;
        for (size_t r = 0; r < m; ++r) run.push_back(mono.f[r].vec);
        step(s, nl, "repeats",
             mono.str() + " run length " + std::to_string(m) + " at " + std::to_string(runv));
        RepeatsParts parts = repeats_reduce(v, a, c2, run, runv, c2.M, tc);
        ModeExpression lower_full, shifted_full;
        auto append_tail = [&](const ModeExpression& src, ModeExpression& dst) {
          for (const auto& [xm, xs] : src.t) {
            ModeMonomial next;
            next.gen = mono.gen;
            next.f = xm.f;
            next.f.insert(next.f.end(), mono.f.begin() + static_cast<long>(m), mono.f.end());
            dst.accum(next, coef * xs);
          }
        };
        append_tail(parts.lower, lower_full);
        append_tail(parts.shifted, shifted_full);
        // lower filtration recurses at this level; sigma terms re-run the
        // lower levels first, after which their heads exceed nl
        ModeExpression lw = normalize(lower_full, nl, depth + 1);
        for (const auto& [xm, xs] : lw.t) out.accum(xm, xs);
        ModeExpression sh = normalize(shifted_full, nl - 1, depth + 1);
        for (const auto& [xm, xs] : sh.t) work.emplace_back(xm, xs);
        continue;
      }
      // p > 0: the head factor is above the run; normalize the tail alone,
      // then insert the head back in order
      ModeFactor head = mono.f[0];
      ModeMonomial tail;
      tail.gen = mono.gen;
      tail.f.assign(mono.f.begin() + 1, mono.f.end());
      step(s, nl, "descend", "peel " + mono.str());
      ModeExpression tl = normalize(ModeExpression::single(tail, Scalar(1)), nl, depth + 1);
      for (const auto& [xm, xs] : tl.t) {
        ModeMonomial next;
        next.gen = mono.gen;
        next.f.push_back(head);
        next.f.insert(next.f.end(), xm.f.begin(), xm.f.end());
        // bubble the head right through any larger modes
        ModeExpression ins = insert_sort(next, coef * xs, nl);
        for (const auto& [ym, ys] : ins.t) {
          if (normal_form(ym, nl))
            out.accum(ym, ys);
          else
            work.emplace_back(ym, ys);
        }
      }
    }
    return out;
  }

  // sorts a monomial whose factors are ordered except for f[0]; byproducts
  // re-enter the full pipeline at the lower filtration
  ModeExpression insert_sort(const ModeMonomial& mono, const Scalar& coef, long nl) {
    ModeExpression out;
    std::vector<std::pair<ModeMonomial, Scalar>> work{{mono, coef}};
    while (!work.empty()) {
      auto [mn, cf] = work.back();
      work.pop_back();
      if (cf.is_zero()) continue;
      size_t inv = mn.f.size();
      for (size_t i = 0; i + 1 < mn.f.size(); ++i)
        if (nsub(mn.f[i]) < nsub(mn.f[i + 1])) {
          inv = i;
          break;
        }
      if (inv == mn.f.size()) {
        if (!mn.f.empty() && nsub(mn.f.back()) <= L) {
          step(mn.weight_sum(), nl, "drop", mn.str());
          continue;
        }
        out.accum(mn, cf);
        continue;
      }
      const ModeFactor fu = mn.f[inv];
      const ModeFactor fv = mn.f[inv + 1];
      step(mn.weight_sum(), nl, "insert", mn.str() + " at " + std::to_string(inv));
      ModeMonomial swapped = mn;
      std::swap(swapped.f[inv], swapped.f[inv + 1]);
      work.emplace_back(swapped, cf);
      ModeExpression comm = commutator_expand(v, a, fu.vec, fu.n.offset, fv.vec, fv.n.offset);
      ModeExpression byprod;
      for (const auto& [xm, xs] : comm.t) {
        ModeMonomial next;
        next.gen = mn.gen;
        next.f.assign(mn.f.begin(), mn.f.begin() + static_cast<long>(inv));
        next.f.insert(next.f.end(), xm.f.begin(), xm.f.end());
        next.f.insert(next.f.end(), mn.f.begin() + static_cast<long>(inv) + 2, mn.f.end());
        byprod.accum(next, cf * xs);
      }
      ModeExpression nb = normalize(byprod, nl, 0);
      for (const auto& [xm, xs] : nb.t) out.accum(xm, xs);
    }
    return out;
  }
};

} // namespace detail

/// Rewrites an expression into the spanning form of the C2 spanning set
/// proposition: factors drawn from B, modes n_1 >= ... >= n_k all > L, and
/// no more than M equal modes at values <= N. Follows the proof's double
/// induction on (filtration weight, repeat level); the certificate carries
/// the full trace. The input and output agree exactly on the generator.
inline SpanningCertificate spanning_normalize(const VOAData& v, const AutomorphismData& a,
                                              const TwistedModuleData& w, const C2Report& c2,
                                              const ModeExpression& input, long L, long N,
                                              long budget = 200000) {
  if (!c2.m_certified)
    throw TwistError("PreconditionViolated", "C2 quotient is not stabilized within the cutoff");
  if (N < L) throw TwistError("BadInput", "repeat level N must be at least L");
  SpanningCertificate cert;
  cert.L = L;
  cert.M = c2.M;
  cert.N = N;

  detail::Normalizer nz{v, a, w, c2, L, N, budget, &cert,
                        TruncationContext{w.max_degree()}, {}, {}};
  for (const auto& r : c2.B) {
    if (r.v.c.size() != 1 || !(r.v.c.begin()->second == Scalar(1)))
      throw TwistError("PreconditionViolated", "B representative is not a basis vector");
    nz.bset.insert(r.v.c.begin()->first);
    nz.reps_by_weight[r.weight].push_back(r.v.c.begin()->first);
  }
  // L must annihilate the generator across B
  for (const auto& r : c2.B) {
    BRef b = r.v.c.begin()->first;
    long t_lo = rat_ceil_long(r.alpha + 1 - rat(b.first) - w.degree(w.generator));
    for (long nn = t_lo; nn <= L; ++nn) {
      Vec res = w.action(b, Exponent::from_value(r.alpha - rat(nn)), 0, w.generator);
      if (!res.is_zero())
        throw TwistError("PreconditionViolated",
                         "L is not an annihilation bound: " + voa::bref_str(b) + " at n = " +
                             std::to_string(nn));
    }
  }

  cert.normal = nz.normalize(input, N, 0);

  // the rewrite is exact on the generator
  Vec before, after;
  try {
    before = eval(w, input);
    after = eval(w, cert.normal);
  } catch (const TwistError& e) {
    throw TwistError("CutoffTooSmall", std::string("certificate check needs a larger table: ") +
                                           e.what());
  }
  if (!(before == after))
    throw TwistError("PreconditionViolated", "normalized expression diverges from the input");
  for (const auto& [m, c] : cert.normal.t)
    if (!nz.normal_form(m, N))
      throw TwistError("PreconditionViolated", "output misses the spanning conditions: " + m.str());
  return cert;
}

// ---------------------------------------------------------------------------
// C_n subspaces and quotients

struct CnReport {
  int n = 0;
  int window2 = 0;  // scaled degree window
  long dim_window = 0;
  long cn_rank = 0;
  long quotient = 0;
  bool residue_match = true;
  bool log_match = true;
  long checks = 0;
  std::vector<long> quotient_by_degree;
};

namespace detail {

/// All C_n(W) spanning vectors with result degree within the window,
/// grouped per scaled degree. n = 1 restricts to u in V_+.
inline std::vector<std::vector<std::pair<Vec, std::tuple<BRef, BRef>>>> cn_generators(
    const VOAData& v, const AutomorphismData& a, const TwistedModuleData& w, int n,
    int window2) {
  std::vector<std::vector<std::pair<Vec, std::tuple<BRef, BRef>>>> out(
      static_cast<size_t>(window2) + 1);
  for (int uw = (n == 1 ? 1 : 0); uw <= v.w_max; ++uw)
    for (int ui = 0; ui < v.dim(uw); ++ui) {
      BRef ub{uw, ui};
      Rat alpha = a.alpha_of(Vec::unit(ub));
      Exponent mode = Exponent::from_value(alpha - rat(n));
      for (int w2 = 0; w2 <= w.d2_max; ++w2)
        for (int wi = 0; wi < w.dim(w2); ++wi) {
          BRef wb{w2, wi};
          Rat dres = w.degree(wb) + rat(uw) - mode.value() - 1;
          Rat scaled = dres * rat(w.denom);
          if (!exactalg::rat_is_int(scaled)) continue;
          long d2 = exactalg::rat_to_long(scaled);
          if (d2 < 0 || d2 > window2) continue;
          Vec r = w.action(ub, mode, 0, wb);
          if (r.is_zero()) continue;
          out[static_cast<size_t>(d2)].emplace_back(r, std::make_tuple(ub, wb));
        }
    }
  return out;
}

} // namespace detail

/// Spanning vectors for C_n(W) within the window, one independent set per
/// scaled degree.
inline std::vector<std::vector<Vec>> cn_subspace(const VOAData& v, const AutomorphismData& a,
                                                 const TwistedModuleData& w, int n,
                                                 int window2) {
  if (n < 1) throw TwistError("BadInput", "C_n needs n >= 1");
  if (window2 > w.d2_max)
    throw TwistError("CutoffTooSmall", "window exceeds the module cutoff");
  auto gens = detail::cn_generators(v, a, w, n, window2);
  std::vector<std::vector<Vec>> out(static_cast<size_t>(window2) + 1);
  for (int d2 = 0; d2 <= window2; ++d2) {
    RowSpan<Cyclo> span(w.dim(d2));
    for (const auto& [vec, src] : gens[static_cast<size_t>(d2)])
      if (span.add(voa::vec_to_cyclo_coords(vec, d2, w.dim(d2))))
        out[static_cast<size_t>(d2)].push_back(vec);
  }
  return out;
}

/// Quotient dimension dim W/C_n(W) within the window, with the residue-form
/// cross-check and the log-inclusive spanning equivalence.
inline CnReport cn_quotient(const VOAData& v, const AutomorphismData& a,
                            const TwistedModuleData& w, int n, int window2) {
  if (n < 1) throw TwistError("BadInput", "C_n needs n >= 1");
  if (window2 > w.d2_max)
    throw TwistError("CutoffTooSmall", "window exceeds the module cutoff");
  CnReport rep;
  rep.n = n;
  rep.window2 = window2;
  auto gens = detail::cn_generators(v, a, w, n, window2);
  std::vector<RowSpan<Cyclo>> spans;
  std::vector<RowSpan<Cyclo>> spans_log;
  for (int d2 = 0; d2 <= window2; ++d2) {
    spans.emplace_back(w.dim(d2));
    spans_log.emplace_back(w.dim(d2));
  }
  for (int d2 = 0; d2 <= window2; ++d2)
    for (const auto& [vec, src] : gens[static_cast<size_t>(d2)]) {
      spans[static_cast<size_t>(d2)].add(voa::vec_to_cyclo_coords(vec, d2, w.dim(d2)));
      spans_log[static_cast<size_t>(d2)].add(voa::vec_to_cyclo_coords(vec, d2, w.dim(d2)));
      // residue form: the same vector through the assembled series, at the
      // exponent -mode - 1 the residue extraction selects
      const auto& [ub, wb] = src;
      Rat alpha = a.alpha_of(Vec::unit(ub));
      Exponent mode = Exponent::from_value(alpha - rat(n));
      Exponent evec = Exponent::from_value(-mode.value() - 1);
      auto ser = twisted::twisted_series(w, a, Vec::unit(ub), Vec::unit(wb));
      ++rep.checks;
      if (!(ser.coeff(evec, 0) == vec)) rep.residue_match = false;
    }
  // log-inclusive spanning set: u(alpha - n, k) w adds nothing new
  for (int k = 1; k <= w.K; ++k)
    for (int uw = (n == 1 ? 1 : 0); uw <= v.w_max; ++uw)
      for (int ui = 0; ui < v.dim(uw); ++ui) {
        BRef ub{uw, ui};
        Rat alpha = a.alpha_of(Vec::unit(ub));
        Exponent mode = Exponent::from_value(alpha - rat(n));
        for (int w2 = 0; w2 <= w.d2_max; ++w2)
          for (int wi = 0; wi < w.dim(w2); ++wi) {
            BRef wb{w2, wi};
            Rat dres = w.degree(wb) + rat(uw) - mode.value() - 1;
            Rat scaled = dres * rat(w.denom);
            if (!exactalg::rat_is_int(scaled)) continue;
            long d2 = exactalg::rat_to_long(scaled);
            if (d2 < 0 || d2 > window2) continue;
            Vec r = w.action(ub, mode, k, wb);
            if (r.is_zero()) continue;
            spans_log[static_cast<size_t>(d2)].add(
                voa::vec_to_cyclo_coords(r, static_cast<int>(d2), w.dim(static_cast<int>(d2))));
          }
      }
  rep.quotient_by_degree.resize(static_cast<size_t>(window2) + 1, 0);
  for (int d2 = 0; d2 <= window2; ++d2) {
    rep.dim_window += w.dim(d2);
    rep.cn_rank += spans[static_cast<size_t>(d2)].rank();
    rep.quotient_by_degree[static_cast<size_t>(d2)] =
        w.dim(d2) - spans[static_cast<size_t>(d2)].rank();
    if (spans_log[static_cast<size_t>(d2)].rank() != spans[static_cast<size_t>(d2)].rank())
      rep.log_match = false;
  }
  rep.quotient = rep.dim_window - rep.cn_rank;
  return rep;
}

/// C_n(W) is contained in C_{n-1}(W) within the window (n >= 3 generally;
/// n = 2 needs CFT type, with the replacement vectors in V_+).
inline bool cn_nested(const VOAData& v, const AutomorphismData& a, const TwistedModuleData& w,
                      int n, int window2) {
  if (n < 2) throw TwistError("BadInput", "nesting needs n >= 2");
  if (n == 2 && !v.cft_type)
    throw TwistError("PreconditionViolated", "C_2 into C_1 needs CFT type");
  auto lower = detail::cn_generators(v, a, w, n - 1, window2);
  auto upper = detail::cn_generators(v, a, w, n, window2);
  for (int d2 = 0; d2 <= window2; ++d2) {
    RowSpan<Cyclo> span(w.dim(d2));
    for (const auto& [vec, src] : lower[static_cast<size_t>(d2)])
      span.add(voa::vec_to_cyclo_coords(vec, d2, w.dim(d2)));
    for (const auto& [vec, src] : upper[static_cast<size_t>(d2)])
      if (!span.contains(voa::vec_to_cyclo_coords(vec, d2, w.dim(d2)))) return false;
  }
  return true;
}

} // namespace twistcalc::rewrite
