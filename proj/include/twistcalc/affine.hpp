#pragma once

#include <memory>

#include "fock.hpp"
#include "twisted.hpp"

namespace twistcalc::examples {

/// A finite-dimensional Lie algebra with an invariant symmetric form,
/// presented through structure constants: [x_s, x_t] = sum_u f[s][t][u] x_u.
struct AffineSpec {
  int species = 0;
  std::vector<std::vector<std::vector<Rat>>> bracket;
  std::vector<std::vector<Rat>> form;
  std::vector<std::string> names;
  Rat level;
};

/// Vertex algebra of the affinization at the given level. States are the
/// ordered monomials x_{s_1}(-n_1)...x_{s_r}(-n_r)1 enumerated by FockBasis;
/// unlike the Heisenberg case the modes do not commute, so every operator
/// application is straightened back into the ordered basis through
///   [x_s(m), x_t(n)] = [x_s,x_t](m+n) + m <x_s,x_t> level delta_{m+n,0}.
class AffineEngine {
public:
  AffineEngine(AffineSpec spec, std::shared_ptr<const FockBasis> basis)
      : spec_(std::move(spec)), b_(std::move(basis)) {}

  const FockBasis& basis() const { return *b_; }

  /// x_s(q) applied to a basis state, straightened.
  Vec act(int s, long q, const BRef& w) {
    if (q < 0 && w.first + (-q) > b_->w_max)
      throw TwistError("TableIncomplete", "mode pushes past the weight cutoff");
    auto key = std::make_tuple(s, q, w);
    auto it = amemo_.find(key);
    if (it != amemo_.end()) return it->second;
    const State& st = b_->state_of(w);
    Vec out;
    if (st.empty()) {
      if (q < 0) out = Vec::unit(b_->ref_of(State{{static_cast<int>(-q), s}}));
    } else {
      Part head = st[0];
      Part mine{static_cast<int>(-q), s};
      if (q < 0 && (part_before(mine, head) || mine == head)) {
        State ns = st;
        ns.insert(ns.begin(), mine);
        out = Vec::unit(b_->ref_of(ns));
      } else {
        BRef rest = b_->ref_of(State(st.begin() + 1, st.end()));
        out = act(head.second, -head.first, act(s, q, rest));
        for (int u = 0; u < spec_.species; ++u) {
          const Rat& c = spec_.bracket[static_cast<size_t>(s)][static_cast<size_t>(head.second)]
                                      [static_cast<size_t>(u)];
          if (c != 0) out = out + act(u, q - head.first, rest) * Scalar(c);
        }
        if (q == head.first) {
          Rat c = rat(q) * spec_.level *
                  spec_.form[static_cast<size_t>(s)][static_cast<size_t>(head.second)];
          if (c != 0) out = out + Vec::unit(rest) * Scalar(c);
        }
      }
    }
    amemo_.emplace(key, out);
    return out;
  }

  Vec act(int s, long q, const Vec& w) {
    Vec out;
    for (const auto& [b, c] : w.c) {
      Vec t = act(s, q, b);
      for (const auto& [tb, tc] : t.c) out.accum(tb, tc * c);
    }
    return out;
  }

  /// u(n)v through the iterate recursion, peeling the top mode of u.
  Vec product(const BRef& u, long n, const BRef& v) {
    long wres = u.first + v.first - n - 1;
    if (wres < 0) return Vec{};
    if (wres > b_->w_max)
      throw TwistError("TableIncomplete", "product lands beyond the weight cutoff");
    auto key = std::make_tuple(u, n, v);
    auto it = pmemo_.find(key);
    if (it != pmemo_.end()) return it->second;
    Vec out;
    const State& st = b_->state_of(u);
    if (st.empty()) {
      if (n == -1) out = Vec::unit(v);
    } else {
      long m = st[0].first;
      int s = st[0].second;
      BRef up = b_->ref_of(State(st.begin() + 1, st.end()));
      for (long j = 0; j <= up.first + v.first - n - 1; ++j) {
        Rat coef = exactalg::rat_binom(rat(-m), j);
        if (j % 2) coef = -coef;
        if (coef == 0) continue;
        Vec inner = product_vec(up, n + j, Vec::unit(v));
        if (inner.is_zero()) continue;
        out = out + act(s, -(m + j), inner) * Scalar(coef);
      }
      for (long j = 0; j <= v.first; ++j) {
        Rat coef = exactalg::rat_binom(rat(-m), j);
        if (j % 2) coef = -coef;
        if (m % 2 == 0) coef = -coef;
        if (coef == 0) continue;
        Vec av = act(s, j, v);
        if (av.is_zero()) continue;
        out = out + product_vec(up, -m + n - j, av) * Scalar(coef);
      }
    }
    pmemo_.emplace(key, out);
    return out;
  }

  Vec product_vec(const BRef& u, long n, const Vec& v) {
    Vec out;
    for (const auto& [b, c] : v.c) {
      Vec t = product(u, n, b);
      for (const auto& [tb, tc] : t.c) out.accum(tb, tc * c);
    }
    return out;
  }

private:
  AffineSpec spec_;
  std::shared_ptr<const FockBasis> b_;
  std::map<std::tuple<int, long, BRef>, Vec> amemo_;
  std::map<std::tuple<BRef, long, BRef>, Vec> pmemo_;
};

struct AffineExample {
  std::shared_ptr<FockBasis> basis;
  std::shared_ptr<AffineEngine> engine;
  voa::VOAData V;
};

/// Affine sl2 at a non-critical level, with the Sugawara conformal vector.
/// Species order: e, h, f.
inline AffineExample build_affine_sl2(int cutoff, const Rat& level) {
  if (level == -2)
    throw TwistError("PreconditionViolated", "critical level has no Sugawara vector");
  AffineSpec spec;
  spec.species = 3;
  spec.names = {"e", "h", "f"};
  spec.level = level;
  auto z = rat(0);
  spec.bracket.assign(3, std::vector<std::vector<Rat>>(3, std::vector<Rat>(3, z)));
  // [e,h] = -2e, [e,f] = h, [h,f] = -2f, antisymmetrized
  spec.bracket[0][1][0] = rat(-2);
  spec.bracket[1][0][0] = rat(2);
  spec.bracket[0][2][1] = rat(1);
  spec.bracket[2][0][1] = rat(-1);
  spec.bracket[1][2][2] = rat(-2);
  spec.bracket[2][1][2] = rat(2);
  spec.form = {{z, z, rat(1)}, {z, rat(2), z}, {rat(1), z, z}};

  FockSpec fs;
  fs.species = 3;
  fs.gram = spec.form;  // only used for state enumeration and names
  fs.names = spec.names;
  AffineExample ex;
  ex.basis = std::make_shared<FockBasis>(FockBasis::build(fs, cutoff));
  ex.engine = std::make_shared<AffineEngine>(spec, ex.basis);

  voa::VOAData V;
  V.w_max = cutoff;
  V.dims.resize(static_cast<size_t>(cutoff) + 1);
  V.names.resize(static_cast<size_t>(cutoff) + 1);
  for (int w = 0; w <= cutoff; ++w) {
    V.dims[static_cast<size_t>(w)] = ex.basis->dim(w);
    for (int i = 0; i < ex.basis->dim(w); ++i)
      V.names[static_cast<size_t>(w)].push_back(ex.basis->name_of({w, i}));
  }
  V.vacuum = {0, 0};
  V.central_charge = rat(3) * level / (level + 2);
  V.cft_type = true;
  V.conductor = 1;
  auto eng = ex.engine;
  V.provider = [eng](const BRef& u, long n, const BRef& v) { return eng->product(u, n, v); };
  // Sugawara: (1/(2(level+2))) (2 e(-1)f(-1) + h(-1)h(-1)/2 - h(-2)) 1
  Rat pref = rat(1) / (rat(2) * (level + 2));
  Vec om;
  om.accum(ex.basis->ref_of(State{{1, 0}, {1, 2}}), Scalar(pref * 2));
  om.accum(ex.basis->ref_of(State{{1, 1}, {1, 1}}), Scalar(pref / 2));
  om.accum(ex.basis->ref_of(State{{2, 1}}), Scalar(-pref));
  V.omega = om;
  ex.V = V;
  return ex;
}

/// The operator -e(0) on the tabulated basis, column by column. It is a
/// nilpotent derivation, the exponent of the inner automorphism below.
inline exactalg::GradedOperator affine_minus_e0(const AffineExample& ex) {
  exactalg::GradedOperator nop;
  for (int w = 0; w <= ex.V.w_max; ++w) {
    int d = ex.V.dim(w);
    exactalg::Mat<Scalar> m = exactalg::Mat<Scalar>::zero(d, d);
    for (int j = 0; j < d; ++j) {
      Vec col = ex.engine->act(0, 0, BRef{w, j});
      for (const auto& [b, c] : col.c) m.at(b.second, j) = c * Scalar(-1);
    }
    nop.set_block(w, m);
  }
  return nop;
}

/// The weak twisted module over affine sl2 attached to the inner unipotent
/// automorphism g = exp(-2 pi i e(0)): the space is V itself and
///   Y_W(u, x) = Y(D(x) u, x),
///   D(x) = x^{e(0)} exp( sum_{k >= 1} ((-1)^{k+1}/k) e(k) x^{-k} ).
/// The e(k) commute with each other (<e,e> = 0), so D is an honest
/// exponential; N = -e(0) and the log powers come from x^{e(0)}.
inline twisted::TwistedModuleData affine_nilpotent_twist(const AffineExample& ex, int K) {
  twisted::TwistedModuleData W;
  W.denom = 1;
  W.d2_max = ex.V.w_max;
  W.dims = ex.V.dims;
  W.names = ex.V.names;
  W.generator = ex.V.vacuum;
  W.K = K;
  W.conductor = 1;
  auto eng = ex.engine;
  auto vp = std::make_shared<voa::VOAData>(ex.V);
  // dressing coefficients per input u: weight drop d and log power j
  auto table = std::make_shared<std::map<BRef, std::map<std::pair<long, int>, Vec>>>();
  W.provider = [eng, vp, table, K](const BRef& u, const logcalc::Exponent& n, int k,
                                   const BRef& w) -> Vec {
    if (!n.is_integer()) return Vec{};
    auto tu = table->find(u);
    if (tu == table->end()) {
      std::map<long, Vec> acc;
      acc[0] = Vec::unit(u);
      for (long kk = 1; kk <= u.first; ++kk) {
        Rat c = rat(kk % 2 ? 1 : -1, kk);
        std::map<long, Vec> next;
        for (const auto& [d, vec] : acc) {
          Vec term = vec;
          Rat coef = 1;
          long r = 0;
          while (!term.is_zero()) {
            Vec& slot = next[d + kk * r];
            slot = slot + term * Scalar(coef);
            term = eng->act(0, kk, term);
            ++r;
            coef = coef * c / rat(r);
          }
        }
        acc = std::move(next);
      }
      std::map<std::pair<long, int>, Vec> full;
      for (const auto& [d, vec] : acc) {
        Vec term = vec;
        Rat coef = 1;
        int j = 0;
        while (!term.is_zero()) {
          if (j > K)
            throw TwistError("PreconditionViolated", "log cap below the zero-mode nilpotency");
          full[{d, j}] = term * Scalar(coef);
          term = eng->act(0, 0, term);
          ++j;
          coef = coef / rat(j);
        }
      }
      tu = table->emplace(u, std::move(full)).first;
    }
    Vec out;
    for (const auto& [dj, vec] : tu->second) {
      if (dj.second != k) continue;
      Vec t = vp->product(vec, n.offset - dj.first, Vec::unit(w));
      out = out + t;
    }
    return out;
  };
  return W;
}

/// The (V, g, W) triple for the inner unipotent automorphism of affine sl2
/// at level one. V is generated by the two currents e and f (h is their
/// bracket), N = tau times -e(0) is a tabulated nilpotent derivation with
/// g = exp(2 pi i N), and W carries the x^{-N}-twist of the log-free
/// dressed action, so every log identity has a tabulated ground truth.
struct UnipotentFragment {
  std::shared_ptr<FockBasis> basis;
  std::shared_ptr<AffineEngine> engine;
  voa::VOAData V;
  voa::AutomorphismData A;
  twisted::TwistedModuleData W;
};

inline UnipotentFragment build_unipotent_fragment(int cutoff) {
  if (cutoff < 2)
    throw TwistError("CutoffTooSmall", "unipotent fragment needs cutoff >= 2");
  auto ex = build_affine_sl2(cutoff, rat(1));
  UnipotentFragment out;
  out.basis = ex.basis;
  out.engine = ex.engine;
  out.V = ex.V;
  out.A = voa::automorphism_from_nilpotent(ex.V, affine_minus_e0(ex));
  out.W = affine_nilpotent_twist(ex, out.A.K);
  return out;
}

} // namespace twistcalc::examples
