#pragma once

#include <memory>

#include "fock.hpp"
#include "twisted.hpp"

namespace twistcalc::examples {

/// A tabulated algebra together with the automorphism it is meant to be
/// twisted by. The basis handle stays available for oracle tests.
struct AlgebraExample {
  std::shared_ptr<FockBasis> basis;   // null for hand-tabulated instances
  voa::VOAData V;
  exactalg::GradedOperator g;
  unsigned T = 1;
};

inline voa::VOAData heisenberg_voa(const std::shared_ptr<FockBasis>& basis, int cutoff) {
  voa::VOAData V;
  V.w_max = cutoff;
  V.dims.resize(static_cast<size_t>(cutoff) + 1);
  V.names.resize(static_cast<size_t>(cutoff) + 1);
  for (int w = 0; w <= cutoff; ++w) {
    V.dims[static_cast<size_t>(w)] = basis->dim(w);
    for (int i = 0; i < basis->dim(w); ++i)
      V.names[static_cast<size_t>(w)].push_back(basis->name_of({w, i}));
  }
  V.vacuum = {0, 0};
  V.central_charge = rat(basis->spec.species);
  V.conductor = 1;

  auto engine = std::make_shared<FockProductEngine>(*basis);
  V.provider = [engine](const BRef& u, long n, const BRef& v) {
    return engine->product(u, n, v);
  };

  // omega = (1/2) sum_{s,t} Ginv[s][t] a_s(-1) a_t(-1) 1
  int S = basis->spec.species;
  exactalg::Mat<Rat> G(S, S);
  for (int s = 0; s < S; ++s)
    for (int t = 0; t < S; ++t) G.at(s, t) = basis->spec.gram[static_cast<size_t>(s)][static_cast<size_t>(t)];
  auto Ginv = exactalg::mat_inverse(G);
  if (!Ginv)
    throw TwistError("PreconditionViolated", "degenerate Gram form");
  for (int s = 0; s < S; ++s)
    for (int t = 0; t < S; ++t) {
      Rat c = Ginv->at(s, t);
      if (c == 0) continue;
      State st{{1, s}, {1, t}};
      sort_state(st);
      V.omega.accum(basis->ref_of(st), Scalar(c / rat(2)));
    }
  return V;
}

/// Rank-one Heisenberg algebra, kappa = 1, with the order-two automorphism
/// g = -1 on the generator.
inline AlgebraExample build_free_boson(int cutoff) {
  if (cutoff < 2)
    throw TwistError("CutoffTooSmall", "free boson needs cutoff >= 2");
  FockSpec spec;
  spec.species = 1;
  spec.gram = {{rat(1)}};
  spec.names = {"a"};
  AlgebraExample ex;
  ex.basis = std::make_shared<FockBasis>(FockBasis::build(spec, cutoff));
  ex.V = heisenberg_voa(ex.basis, cutoff);
  ex.g = parity_operator(*ex.basis, rat(-1));
  ex.T = 2;
  return ex;
}

/// The one-dimensional algebra spanned by the vacuum, padded with empty
/// weight slots so cofiniteness thresholds can be certified.
inline AlgebraExample build_trivial() {
  AlgebraExample ex;
  voa::VOAData& V = ex.V;
  V.w_max = 2;
  V.dims = {1, 0, 0};
  V.names = {{"1"}, {}, {}};
  V.vacuum = {0, 0};
  V.central_charge = rat(0);
  V.conductor = 1;
  V.set_product({0, 0}, -1, {0, 0}, Vec::unit({0, 0}));
  ex.g.set_block(0, exactalg::Mat<Scalar>::identity(1));
  ex.g.set_block(1, exactalg::Mat<Scalar>::identity(0));
  ex.g.set_block(2, exactalg::Mat<Scalar>::identity(0));
  ex.T = 1;
  return ex;
}

/// The trivial module over the trivial algebra: one generator in degree
/// zero, every C_n vanishes, quotient dimension one.
inline twisted::TwistedModuleData trivial_module() {
  twisted::TwistedModuleData W;
  W.denom = 1;
  W.d2_max = 8;
  W.dims.assign(9, 0);
  W.dims[0] = 1;
  W.names.assign(9, {});
  W.names[0] = {"w"};
  W.generator = {0, 0};
  W.K = 0;
  W.conductor = 1;
  W.provider = [](const BRef& u, const logcalc::Exponent& n, int k, const BRef& w) -> Vec {
    (void)u;
    if (k == 0 && n.is_integer() && n.offset == -1) return Vec::unit(w);
    return Vec{};
  };
  return W;
}

/// Rank-three Heisenberg fragment with an outer unipotent automorphism:
/// the form pairs p with q and r with itself, and the skew derivation sends
/// q -> r, r -> -p, p -> 0, so g = exp(R) is rational unipotent with
/// (g - 1)^3 = 0 on the generators. R is not an inner zero mode, so the
/// naive log dressing over this fragment is a negative control: it gets the
/// monodromy layer right and fails the module axioms.
struct OuterNilpotentExample {
  std::shared_ptr<FockBasis> basis;
  voa::VOAData V;
  exactalg::GradedOperator R;   // the derivation itself (rational)
  exactalg::GradedOperator g;   // exp(R)
  unsigned T = 1;
};

inline OuterNilpotentExample build_outer_nilpotent(int cutoff) {
  if (cutoff < 2)
    throw TwistError("CutoffTooSmall", "outer nilpotent fragment needs cutoff >= 2");
  FockSpec spec;
  spec.species = 3;
  spec.gram = {{rat(0), rat(1), rat(0)},
               {rat(1), rat(0), rat(0)},
               {rat(0), rat(0), rat(1)}};
  spec.names = {"p", "q", "r"};
  OuterNilpotentExample ex;
  ex.basis = std::make_shared<FockBasis>(FockBasis::build(spec, cutoff));
  ex.V = heisenberg_voa(ex.basis, cutoff);
  // action[t][s]: coefficient of species t in the image of species s
  std::vector<std::vector<Rat>> action = {{rat(0), rat(0), rat(-1)},
                                          {rat(0), rat(0), rat(0)},
                                          {rat(0), rat(1), rat(0)}};
  ex.R = species_derivation(*ex.basis, action);
  ex.g = exp_nilpotent(ex.R);
  ex.T = 1;
  return ex;
}

/// Action tables for the parity-twisted Fock module over the Heisenberg
/// algebra. Module states are half-integer oscillator monomials; the mode
/// a_s(-m) u' is expanded through the iterate identity, whose three sums
/// recurse on strictly smaller algebra weight:
///   (a(-m)u')(s+n) = - sum_{j>=1} binom(1/2,j) (a(-m+j)u')(s+n-j)
///     + sum_{j>=0} (-1)^j binom(-m,j) a(1/2-m-j) u'(s-1/2+n+j)
///     + sum_{j>=0} (-1)^{m+j+1} binom(-m,j) u'(s-1/2-m+n-j) a(1/2+j)
/// Every intermediate lands at or below the degree of the result, so the
/// cutoff never truncates a needed term.
class TwistedFockEngine {
public:
  TwistedFockEngine(std::shared_ptr<const voa::VOAData> v,
                    std::shared_ptr<const FockBasis> vbasis,
                    std::shared_ptr<const FockBasis> wbasis)
      : v_(std::move(v)), vb_(std::move(vbasis)), wb_(std::move(wbasis)) {}

  Rat alpha_of(const BRef& u) const {
    return rat(static_cast<long>(vb_->state_of(u).size()) % 2, 2);
  }

  /// u(mu) w for basis u in V and basis w in W.
  Vec mode(const BRef& u, const logcalc::Exponent& mu, const BRef& w) {
    Rat alpha = alpha_of(u);
    if (mu.coset != alpha) return Vec{};  // sum index support
    Rat dres = rat(w.first, 2) + rat(u.first) - mu.value() - 1;
    if (dres < 0) return Vec{};
    if (dres * 2 > rat(wb_->w_max))
      throw TwistError("TableIncomplete", "twisted mode lands beyond the module cutoff");
    auto key = std::make_tuple(u, mu, w);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    Vec out;
    const State& st = vb_->state_of(u);
    if (st.empty()) {
      if (mu.is_integer() && mu.offset == -1) out = Vec::unit(w);
      memo_.emplace(key, out);
      return out;
    }
    long m = st[0].first;
    int sp = st[0].second;
    BRef gen = vb_->ref_of(State{{1, sp}});
    BRef up = vb_->ref_of(State(st.begin() + 1, st.end()));
    // first sum: algebra products a(-m+j)u' at strictly smaller weight
    for (long j = 1; j <= u.first; ++j) {
      Rat bj = exactalg::rat_binom(rat(1, 2), j);
      Vec p = v_->product(gen, -m + j, up);
      if (p.is_zero()) continue;
      for (const auto& [pb, ps] : p.c) {
        Vec t = mode(pb, mu - j, w);
        if (!t.is_zero()) out = out - t * (ps * Scalar(bj));
      }
    }
    // second sum: creation ladder after the recursive tail mode
    for (long j = 0;; ++j) {
      logcalc::Exponent nu = logcalc::Exponent::from_value(mu.value() - rat(1, 2) + j);
      if (rat(w.first, 2) + rat(up.first) - nu.value() - 1 < 0) break;
      Rat coef = exactalg::rat_binom(rat(-m), j);
      if (j % 2) coef = -coef;
      Vec t = mode(up, nu, w);
      if (!t.is_zero())
        out = out + wb_->create(static_cast<int>(2 * (m + j) - 1), sp, t) * Scalar(coef);
    }
    // third sum: annihilation ladder first, then the tail mode
    for (long j = 0; 2 * j + 1 <= w.first; ++j) {
      Rat coef = exactalg::rat_binom(rat(-m), j);
      if ((m + j + 1) % 2) coef = -coef;
      Vec aw = wb_->annihilate(static_cast<int>(2 * j + 1), sp, Vec::unit(w));
      if (aw.is_zero()) continue;
      logcalc::Exponent nu = logcalc::Exponent::from_value(mu.value() - rat(1, 2) - m - j);
      for (const auto& [ab, as] : aw.c) {
        Vec t = mode(up, nu, ab);
        if (!t.is_zero()) out = out + t * (as * Scalar(coef));
      }
    }
    memo_.emplace(key, out);
    return out;
  }

private:
  std::shared_ptr<const voa::VOAData> v_;
  std::shared_ptr<const FockBasis> vb_;
  std::shared_ptr<const FockBasis> wb_;
  std::map<std::tuple<BRef, logcalc::Exponent, BRef>, Vec> memo_;
};

struct TwistedFockExample {
  AlgebraExample alg;                  // free boson with the parity involution
  std::shared_ptr<FockBasis> wbasis;   // half-integer oscillator states
  twisted::TwistedModuleData W;
};

/// cutoff is the algebra weight cutoff; the module is tabulated through
/// scaled degree 2 * cutoff (all half-integer degrees up to cutoff).
inline TwistedFockExample build_twisted_fock(int cutoff) {
  TwistedFockExample ex;
  ex.alg = build_free_boson(cutoff);
  FockSpec spec;
  spec.species = 1;
  spec.gram = {{rat(1)}};
  spec.names = {"a"};
  spec.denom = 2;
  spec.residue = 1;
  ex.wbasis = std::make_shared<FockBasis>(FockBasis::build(spec, 2 * cutoff));
  auto& W = ex.W;
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
  auto vp = std::make_shared<voa::VOAData>(ex.alg.V);
  auto eng = std::make_shared<TwistedFockEngine>(vp, ex.alg.basis, ex.wbasis);
  W.provider = [eng](const BRef& u, const logcalc::Exponent& n, int k, const BRef& w) -> Vec {
    if (k != 0) return Vec{};
    return eng->mode(u, n, w);
  };
  return ex;
}

} // namespace twistcalc::examples
