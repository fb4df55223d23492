#pragma once

#include <memory>

#include "affine.hpp"

namespace twistcalc::examples {

using exactalg::Cyclo;
using exactalg::GradedOperator;
using exactalg::Mat;

/// Rank-one lattice tables for L = sqrt(2) Z, realized as the simple quotient
/// of level-one affine sl2: the currents e, f are the exponentials e^{+-beta}
/// of the lattice generator and h is beta itself. Conventions fixed here and
/// repeated in every emitted report header:
///   - cocycle: epsilon(beta, -beta) = +1, pinned by the structure constants
///     e(0)f = h and e(1)f = 1 of the affine presentation;
///   - the involution is induced by -1 on the lattice: e <-> f, h -> -h;
///   - twisted sector: the exponential operators carry the overall constant
///     sigma * 2^{-<beta,beta>} = sigma/4 with sigma = +1; sigma = -1 gives
///     the second irreducible twisted module over the same tables;
///   - the twisted ground state sits at conformal weight 1/16 above the
///     vacuum; engine degrees are offsets from the ground state and the
///     1/16 itself is report metadata, never an input to any identity.

/// The involution e <-> f, h -> -h of the affine algebra, extended to the
/// vacuum module. Images are straightened back into the PBW basis, so the
/// matrix is not a signed permutation beyond weight one.
inline GradedOperator affine_theta(const AffineExample& ex) {
  const FockBasis& b = *ex.basis;
  GradedOperator out;
  std::map<BRef, Vec> img;
  for (int w = 0; w <= b.w_max; ++w) {
    int d = b.dim(w);
    Mat<Scalar> m = Mat<Scalar>::zero(d, d);
    for (int i = 0; i < d; ++i) {
      BRef ref{w, i};
      const State& st = b.state_of(ref);
      Vec res;
      if (st.empty()) {
        res = Vec::unit(ref);
      } else {
        static const int swap_s[3] = {2, 1, 0};
        static const int sign_s[3] = {1, -1, 1};
        BRef tail = b.ref_of(State(st.begin() + 1, st.end()));
        res = ex.engine->act(swap_s[st[0].second], -st[0].first, img.at(tail)) *
              Scalar(rat(sign_s[st[0].second]));
      }
      for (const auto& [rb, rs] : res.c) m.at(rb.second, i) = rs;
      img.emplace(ref, std::move(res));
    }
    out.set_block(w, std::move(m));
  }
  return out;
}

/// Contravariant pairing of the vacuum module with itself, adjoint rule
///   <x_s(-n) x, y> = <x, x_{sigma(s)}(n) y>,  sigma: e <-> f, h -> h,
/// normalized by <1,1> = 1. Its radical is the maximal proper submodule, so
/// profiles against a weight slot separate points of the simple quotient.
class ShapovalovForm {
public:
  ShapovalovForm(std::shared_ptr<const FockBasis> basis, std::shared_ptr<AffineEngine> engine)
      : b_(std::move(basis)), eng_(std::move(engine)) {}

  Scalar pair(const BRef& x, const BRef& y) {
    if (x.first != y.first) return Scalar();
    auto key = std::make_pair(x, y);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Scalar out;
    const State& xs = b_->state_of(x);
    if (xs.empty()) {
      out = Scalar(1);
    } else {
      static const int adj[3] = {2, 1, 0};
      BRef tail = b_->ref_of(State(xs.begin() + 1, xs.end()));
      Vec lowered = eng_->act(adj[xs[0].second], xs[0].first, Vec::unit(y));
      for (const auto& [lb, lc] : lowered.c) out += lc * pair(tail, lb);
    }
    memo_.emplace(key, out);
    return out;
  }

  /// Pairings of a homogeneous vector against every basis state of weight w.
  std::vector<Cyclo> profile(const Vec& v, int w) {
    int d = b_->dim(w);
    std::vector<Cyclo> out(static_cast<size_t>(d));
    for (const auto& [vb, vs] : v.c) {
      if (vb.first != w)
        throw TwistError("PreconditionViolated", "profile needs a homogeneous vector");
      for (int j = 0; j < d; ++j) {
        Scalar p = pair({w, j}, vb);
        if (!p.is_zero()) out[static_cast<size_t>(j)] = out[static_cast<size_t>(j)] + (p * vs).cyclo_value();
      }
    }
    return out;
  }

private:
  std::shared_ptr<const FockBasis> b_;
  std::shared_ptr<AffineEngine> eng_;
  std::map<std::pair<BRef, BRef>, Scalar> memo_;
};

/// Quotient bookkeeping: an involution-aligned basis of the simple quotient,
/// each element carried as a universal lift, plus enough of the pairing to
/// project any universal vector onto the quotient basis. Projection solves
/// against a pivot minor of the kept profiles, so it touches one pairing row
/// per quotient dimension rather than the full weight slot.
struct LatticeCore {
  std::shared_ptr<FockBasis> basis;
  std::shared_ptr<AffineEngine> engine;
  std::shared_ptr<ShapovalovForm> form;
  int w_max = 0;
  std::vector<std::vector<Vec>> lift;    // quotient basis -> universal vector
  std::vector<std::vector<int>> parity;  // 0: theta-even, 1: theta-odd
  std::vector<std::vector<int>> pivots;  // universal rows used for projection
  std::vector<Mat<Cyclo>> minor_inv;

  Vec project(const Vec& x, int w) const {
    if (x.is_zero()) return Vec{};
    int L = static_cast<int>(lift[static_cast<size_t>(w)].size());
    std::vector<Cyclo> rhs(static_cast<size_t>(L));
    for (const auto& [xb, xs] : x.c) {
      if (xb.first != w)
        throw TwistError("PreconditionViolated", "projection needs a homogeneous vector");
      for (int i = 0; i < L; ++i) {
        Scalar p = form->pair({w, pivots[static_cast<size_t>(w)][static_cast<size_t>(i)]}, xb);
        if (!p.is_zero())
          rhs[static_cast<size_t>(i)] = rhs[static_cast<size_t>(i)] + (p * xs).cyclo_value();
      }
    }
    Vec out;
    const Mat<Cyclo>& inv = minor_inv[static_cast<size_t>(w)];
    for (int k = 0; k < L; ++k) {
      Cyclo v;
      for (int i = 0; i < L; ++i) v = v + inv.at(k, i) * rhs[static_cast<size_t>(i)];
      if (!v.is_zero()) out.accum({w, k}, Scalar(v));
    }
    return out;
  }
};

/// Involution data assembled directly from the aligned basis: g is diagonal
/// with entries (-1)^parity, S is the diagonal of matching exponents, N = 0.
/// The product-compatibility scan of decompose_automorphism costs a full
/// table materialization, so it runs once in the test suite at a small
/// cutoff; the data built here is the same on the nose.
inline voa::AutomorphismData involution_from_parity(const voa::VOAData& v,
                                                    const std::vector<std::vector<int>>& parity) {
  voa::AutomorphismData a;
  a.T = 2;
  GradedOperator p0, p1;
  for (int w = 0; w <= v.w_max; ++w) {
    int d = v.dim(w);
    Mat<Scalar> g = Mat<Scalar>::zero(d, d);
    Mat<Scalar> s = Mat<Scalar>::zero(d, d);
    Mat<Scalar> q0 = Mat<Scalar>::zero(d, d);
    Mat<Scalar> q1 = Mat<Scalar>::zero(d, d);
    for (int i = 0; i < d; ++i) {
      bool odd = parity[static_cast<size_t>(w)][static_cast<size_t>(i)] == 1;
      g.at(i, i) = Scalar(odd ? -1 : 1);
      s.at(i, i) = Scalar(odd ? rat(1, 2) : rat(0));
      (odd ? q1 : q0).at(i, i) = Scalar(1);
    }
    a.g.set_block(w, g);
    a.S.set_block(w, std::move(s));
    a.N.set_block(w, Mat<Scalar>::zero(d, d));
    p0.set_block(w, std::move(q0));
    p1.set_block(w, std::move(q1));
  }
  a.sem = a.g;
  a.unip = a.g.identity_like();
  a.PV = {rat(0), rat(1, 2)};
  a.K = 0;
  a.proj.emplace(rat(0), std::move(p0));
  a.proj.emplace(rat(1, 2), std::move(p1));
  return a;
}

/// Twisted action of the universal monomials on the half-integer oscillator
/// window. h acts as the twisted boson beta with [beta(p), beta(q)] =
/// 2p delta; the currents act through the normal-ordered exponentials
///   (e +- f)(mu) = 2 * (sigma/4) [x^{-mu}] :exp(-X):,  X = sum beta(p)/p x^{-p},
/// which serves u_plus on integer mu and u_minus on half-integer mu (the two
/// cocycle signs cancel on the opposite coset). Composite monomials reduce
/// through the iterate identity per involution eigencomponent uc with
/// exponent alpha:
///   (uc(-m)u')(mu) = - sum_{j>=1} binom(alpha,j) (uc(-m+j)u')(mu-j)
///     + sum_{j>=0} (-1)^j binom(-m,j) uc(alpha-m-j) u'(mu-alpha+j)
///     + sum_{j>=0} (-1)^{m+j+1} binom(-m,j) u'(mu-alpha-m-j) uc(alpha+j),
/// the head splitting as e = (u_plus + u_minus)/2, f = (u_plus - u_minus)/2.
/// Every intermediate lands at or below the degree of the result, so the
/// window never truncates a needed term.
class LatticeTwistEngine {
public:
  LatticeTwistEngine(std::shared_ptr<AffineEngine> engine,
                     std::shared_ptr<const FockBasis> vbasis,
                     std::shared_ptr<const FockBasis> wbasis)
      : eng_(std::move(engine)), vb_(std::move(vbasis)), wb_(std::move(wbasis)) {
    egen_ = vb_->ref_of(State{{1, 0}});
    hgen_ = vb_->ref_of(State{{1, 1}});
    fgen_ = vb_->ref_of(State{{1, 2}});
  }

  /// Y(mu2/2) w for a universal monomial Y and module state w.
  Vec mode(const BRef& y, long mu2, const BRef& w) {
    long dres2 = w.first + 2L * y.first - mu2 - 2;
    if (dres2 < 0) return Vec{};
    if (dres2 > wb_->w_max)
      throw TwistError("TableIncomplete", "twisted mode lands beyond the module cutoff");
    auto key = std::make_tuple(y, mu2, w);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    Vec out;
    const State& st = vb_->state_of(y);
    if (st.empty()) {
      if (mu2 == -2) out = Vec::unit(w);
      memo_.emplace(key, out);
      return out;
    }
    long m = st[0].first;
    int sp = st[0].second;
    BRef up = vb_->ref_of(State(st.begin() + 1, st.end()));

    struct Comp {
      long a2;    // twice the eigenexponent alpha
      Rat kappa;  // head coefficient on this component
      bool h;
    };
    std::vector<Comp> comps;
    if (sp == 1)
      comps = {{1, rat(1), true}};
    else if (sp == 0)
      comps = {{0, rat(1, 2), false}, {1, rat(1, 2), false}};
    else
      comps = {{0, rat(1, 2), false}, {1, rat(-1, 2), false}};

    for (const Comp& c : comps) {
      auto uprod = [&](long n) -> Vec {
        if (c.h) return eng_->product(hgen_, n, up);
        Vec pe = eng_->product(egen_, n, up);
        Vec pf = eng_->product(fgen_, n, up);
        return (c.a2 == 0) ? pe + pf : pe - pf;
      };
      // first sum: binom(alpha, j) vanishes on the even component
      if (c.a2 == 1) {
        for (long j = 1; j <= y.first; ++j) {
          Rat bj = exactalg::rat_binom(rat(1, 2), j) * c.kappa;
          Vec p = uprod(-m + j);
          for (const auto& [pb, ps] : p.c) {
            Vec t = mode(pb, mu2 - 2 * j, w);
            if (!t.is_zero()) out = out - t * (ps * Scalar(bj));
          }
        }
      }
      // second sum: creation side of the generator after the tail mode
      for (long j = 0;; ++j) {
        long nu2 = mu2 - c.a2 + 2 * j;
        if (w.first + 2L * up.first - nu2 - 2 < 0) break;
        Rat coef = exactalg::rat_binom(rat(-m), j) * c.kappa;
        if (j % 2) coef = -coef;
        Vec t = mode(up, nu2, w);
        if (t.is_zero()) continue;
        long p2 = c.a2 - 2 * (m + j);
        Vec g = c.h ? hmode(p2, t) : expmode(p2, t);
        if (!g.is_zero()) out = out + g * Scalar(coef);
      }
      // third sum: generator annihilation first, then the tail mode
      for (long j = 0; c.a2 + 2 * j <= w.first; ++j) {
        Rat coef = exactalg::rat_binom(rat(-m), j) * c.kappa;
        if ((m + j + 1) % 2) coef = -coef;
        long p2 = c.a2 + 2 * j;
        Vec g = c.h ? hmode(p2, Vec::unit(w)) : expmode(p2, Vec::unit(w));
        if (g.is_zero()) continue;
        long nu2 = mu2 - c.a2 - 2 * (m + j);
        for (const auto& [gb, gc] : g.c) {
          Vec t = mode(up, nu2, gb);
          if (!t.is_zero()) out = out + t * (gc * Scalar(coef));
        }
      }
    }
    memo_.emplace(key, out);
    return out;
  }

  /// (e +- f)(p2/2) on a module vector; even p2 is the plus combination,
  /// odd p2 the minus one, the opposite parity cancels to zero.
  Vec expmode(long p2, const Vec& v) {
    Vec out;
    for (const auto& [b, s] : v.c) {
      Vec t = expmode_unit(p2, b);
      for (const auto& [tb, tc] : t.c) out.accum(tb, tc * s);
    }
    return out;
  }

  /// beta(p2/2) on a module vector.
  Vec hmode(long p2, const Vec& v) const {
    if (p2 == 0) return Vec{};
    if (p2 < 0) return wb_->create(static_cast<int>(-p2), 0, v);
    return wb_->annihilate(static_cast<int>(p2), 0, v);
  }

private:
  Vec expmode_unit(long p2, const BRef& w) {
    auto key = std::make_pair(p2, w);
    auto it = ememo_.find(key);
    if (it != ememo_.end()) return it->second;
    // annihilation sweep: exp(-sum_{p>0} beta(p)/p x^{-p}) applied to w,
    // collected by the scaled x-exponent it contributes
    std::map<long, Vec> layers{{0, Vec::unit(w)}};
    for (int a = 1; a <= w.first; a += 2) {
      std::map<long, Vec> next = layers;
      for (const auto& [e2, vec] : layers) {
        Vec cur = vec;
        Rat fact(1);
        for (long j = 1;; ++j) {
          cur = wb_->annihilate(a, 0, cur);
          if (cur.is_zero()) break;
          fact *= rat(j);
          Rat coef = exactalg::rat_pow(rat(-2, a), j) / fact;
          long slot = e2 - a * j;
          auto [pos, fresh] = next.emplace(slot, Vec{});
          pos->second = pos->second + cur * Scalar(coef);
        }
      }
      layers = std::move(next);
    }
    // creation side: every oscillator state of the complementary exponent,
    // weighted by prod (2/a)^mult / mult!
    Vec out;
    for (const auto& [e2, vec] : layers) {
      if (vec.is_zero()) continue;
      long c2 = -p2 - e2;
      if (c2 < 0) continue;
      if (c2 > wb_->w_max)
        throw TwistError("TableIncomplete", "exponential mode exits the module cutoff");
      for (int i = 0; i < wb_->dim(static_cast<int>(c2)); ++i) {
        const State& st = wb_->states[static_cast<size_t>(c2)][static_cast<size_t>(i)];
        Rat coef(1);
        size_t k = 0;
        while (k < st.size()) {
          size_t k2 = k;
          while (k2 < st.size() && st[k2] == st[k]) ++k2;
          long mult = static_cast<long>(k2 - k);
          coef *= exactalg::rat_pow(rat(2, st[k].first), mult) / exactalg::rat_factorial(mult);
          k = k2;
        }
        Vec made = vec;
        for (const Part& p : st) made = wb_->create(p.first, 0, made);
        out = out + made * Scalar(coef);
      }
    }
    out = out * Scalar(rat(1, 2));
    ememo_.emplace(key, out);
    return out;
  }

  std::shared_ptr<AffineEngine> eng_;
  std::shared_ptr<const FockBasis> vb_;
  std::shared_ptr<const FockBasis> wb_;
  BRef egen_, hgen_, fgen_;
  std::map<std::tuple<BRef, long, BRef>, Vec> memo_;
  std::map<std::pair<long, BRef>, Vec> ememo_;
};

struct LatticeExample {
  std::shared_ptr<FockBasis> basis;          // universal affine PBW states
  std::shared_ptr<AffineEngine> engine;
  std::shared_ptr<LatticeCore> core;
  std::shared_ptr<FockBasis> wbasis;         // half-integer oscillator states
  std::shared_ptr<LatticeTwistEngine> teng;
  voa::VOAData V;
  voa::AutomorphismData A;
  twisted::TwistedModuleData W;
};

/// The (V, g, W) triple of the sqrt(2) lattice: V as the involution-aligned
/// Shapovalov quotient of level-one affine sl2, g induced by -1 on the
/// lattice, W the sigma = +1 twisted module tabulated through scaled degree
/// 2 * cutoff.
inline LatticeExample build_lattice_sqrt2(int cutoff) {
  if (cutoff < 3)
    throw TwistError("CutoffTooSmall", "lattice tables need cutoff >= 3");
  AffineExample aff = build_affine_sl2(cutoff, rat(1));

  auto core = std::make_shared<LatticeCore>();
  core->basis = aff.basis;
  core->engine = aff.engine;
  core->form = std::make_shared<ShapovalovForm>(aff.basis, aff.engine);
  core->w_max = cutoff;
  core->lift.resize(static_cast<size_t>(cutoff) + 1);
  core->parity.resize(static_cast<size_t>(cutoff) + 1);
  core->pivots.resize(static_cast<size_t>(cutoff) + 1);

  GradedOperator theta = affine_theta(aff);

  for (int w = 0; w <= cutoff; ++w) {
    int d = aff.basis->dim(w);
    exactalg::RowSpan<Cyclo> span(d);
    std::vector<std::vector<Cyclo>> kept;
    for (int sgn : {1, -1}) {
      for (int i = 0; i < d; ++i) {
        Vec unit = Vec::unit({w, i});
        Vec cand = (unit + apply(theta, unit) * Scalar(rat(sgn))) * Scalar(rat(1, 2));
        if (cand.is_zero()) continue;
        std::vector<Cyclo> prof = core->form->profile(cand, w);
        if (!span.add(prof)) continue;
        core->lift[static_cast<size_t>(w)].push_back(std::move(cand));
        core->parity[static_cast<size_t>(w)].push_back(sgn == 1 ? 0 : 1);
        kept.push_back(std::move(prof));
      }
    }
    // pivot columns of the kept profiles, then the inverse minor
    int L = static_cast<int>(kept.size());
    std::vector<std::vector<Cyclo>> reduced;
    std::vector<int>& piv = core->pivots[static_cast<size_t>(w)];
    for (const auto& row0 : kept) {
      std::vector<Cyclo> row = row0;
      for (size_t r = 0; r < reduced.size(); ++r) {
        const Cyclo& x = row[static_cast<size_t>(piv[r])];
        if (x.is_zero()) continue;
        Cyclo f = x * exactalg::FieldTraits<Cyclo>::inv(reduced[r][static_cast<size_t>(piv[r])]);
        for (int j = 0; j < d; ++j)
          row[static_cast<size_t>(j)] = row[static_cast<size_t>(j)] - f * reduced[r][static_cast<size_t>(j)];
      }
      int lead = -1;
      for (int j = 0; j < d; ++j)
        if (!row[static_cast<size_t>(j)].is_zero()) {
          lead = j;
          break;
        }
      if (lead < 0)
        throw TwistError("PreconditionViolated", "kept profile collapsed during pivoting");
      piv.push_back(lead);
      reduced.push_back(std::move(row));
    }
    Mat<Cyclo> minor(L, L);
    for (int i = 0; i < L; ++i)
      for (int k = 0; k < L; ++k)
        minor.at(i, k) = kept[static_cast<size_t>(k)][static_cast<size_t>(piv[static_cast<size_t>(i)])];
    auto inv = exactalg::mat_inverse(minor);
    if (!inv)
      throw TwistError("PreconditionViolated", "profile pivot minor is singular");
    core->minor_inv.push_back(std::move(*inv));
  }

  LatticeExample ex;
  ex.basis = aff.basis;
  ex.engine = aff.engine;
  ex.core = core;

  voa::VOAData& V = ex.V;
  V.w_max = cutoff;
  V.dims.resize(static_cast<size_t>(cutoff) + 1);
  V.names.resize(static_cast<size_t>(cutoff) + 1);
  for (int w = 0; w <= cutoff; ++w) {
    const auto& lifts = core->lift[static_cast<size_t>(w)];
    V.dims[static_cast<size_t>(w)] = static_cast<int>(lifts.size());
    for (size_t i = 0; i < lifts.size(); ++i) {
      // name the dominant universal state of the lift, signed by parity
      BRef lead = lifts[i].c.begin()->first;
      std::string nm = aff.basis->name_of(lead);
      if (w > 0) nm += core->parity[static_cast<size_t>(w)][i] == 0 ? "+" : "-";
      V.names[static_cast<size_t>(w)].push_back(std::move(nm));
    }
  }
  V.vacuum = {0, 0};
  V.central_charge = rat(1);
  V.cft_type = true;
  V.conductor = 1;
  V.provider = [core](const BRef& u, long n, const BRef& v) -> Vec {
    int wres = u.first + v.first - static_cast<int>(n) - 1;
    const Vec& lu = core->lift[static_cast<size_t>(u.first)][static_cast<size_t>(u.second)];
    const Vec& lv = core->lift[static_cast<size_t>(v.first)][static_cast<size_t>(v.second)];
    Vec uni;
    for (const auto& [ub, us] : lu.c) {
      Vec p = core->engine->product_vec(ub, n, lv);
      for (const auto& [pb, ps] : p.c) uni.accum(pb, ps * us);
    }
    return core->project(uni, wres);
  };
  V.omega = core->project(aff.V.omega, 2);

  ex.A = involution_from_parity(V, core->parity);
  if (apply(ex.A.g, V.omega) != V.omega)
    throw TwistError("NotAutomorphism", "involution moves the conformal vector");

  FockSpec ws;
  ws.species = 1;
  ws.gram = {{rat(2)}};
  ws.names = {"b"};
  ws.denom = 2;
  ws.residue = 1;
  ex.wbasis = std::make_shared<FockBasis>(FockBasis::build(ws, 2 * cutoff));
  ex.teng = std::make_shared<LatticeTwistEngine>(aff.engine, aff.basis, ex.wbasis);

  twisted::TwistedModuleData& W = ex.W;
  W.denom = 2;
  W.d2_max = 2 * cutoff;
  W.dims.resize(static_cast<size_t>(W.d2_max) + 1);
  W.names.resize(static_cast<size_t>(W.d2_max) + 1);
  for (int d2 = 0; d2 <= W.d2_max; ++d2) {
    W.dims[static_cast<size_t>(d2)] = ex.wbasis->dim(d2);
    for (int i = 0; i < ex.wbasis->dim(d2); ++i)
      W.names[static_cast<size_t>(d2)].push_back(ex.wbasis->name_of({d2, i}));
  }
  W.generator = {0, 0};
  W.K = 0;
  W.conductor = 2;
  auto teng = ex.teng;
  W.provider = [core, teng](const BRef& u, const logcalc::Exponent& n, int k,
                            const BRef& w) -> Vec {
    if (k != 0) return Vec{};
    Rat alpha = rat(core->parity[static_cast<size_t>(u.first)][static_cast<size_t>(u.second)], 2);
    if (n.coset != alpha) return Vec{};  // sum index support
    long mu2 = exactalg::rat_to_long(n.value() * 2);
    const Vec& lu = core->lift[static_cast<size_t>(u.first)][static_cast<size_t>(u.second)];
    Vec out;
    for (const auto& [yb, ys] : lu.c) {
      Vec t = teng->mode(yb, mu2, w);
      for (const auto& [tb, tc] : t.c) out.accum(tb, tc * ys);
    }
    return out;
  };
  return ex;
}

} // namespace twistcalc::examples
