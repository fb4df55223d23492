#pragma once

#include <array>
#include <map>
#include <optional>

#include "graded_operator.hpp"
#include "log_series.hpp"

namespace twistcalc::logcalc {

using exactalg::GradedOperator;
using exactalg::operator_binomial;

/// Monomial key over three formal variables: exponents and log powers.
struct MKey {
  std::array<Exponent, 3> e{};
  std::array<int, 3> k{0, 0, 0};

  Rat total() const { return e[0].value() + e[1].value() + e[2].value(); }

  bool operator==(const MKey& o) const { return e == o.e && k == o.k; }
  bool operator<(const MKey& o) const {
    for (int i = 0; i < 3; ++i) {
      if (e[i].coset != o.e[i].coset) return e[i].coset < o.e[i].coset;
      if (e[i].offset != o.e[i].offset) return e[i].offset < o.e[i].offset;
    }
    return k < o.k;
  }

  std::string str() const {
    std::string s;
    for (int i = 0; i < 3; ++i) {
      s += "x" + std::to_string(i) + "^" + e[i].str();
      if (k[i]) s += " log^" + std::to_string(k[i]) + "(x" + std::to_string(i) + ")";
      if (i < 2) s += " ";
    }
    return s;
  }
};

/// Query/comparison window: monomials with e_i <= hi_i and total <= total_hi.
struct Window {
  std::array<RatExt, 3> hi{RatExt::pos_inf(), RatExt::pos_inf(), RatExt::pos_inf()};
  RatExt total_hi = RatExt::pos_inf();

  bool contains(const MKey& key) const {
    for (int i = 0; i < 3; ++i)
      if (hi[i] < RatExt(key.e[i].value())) return false;
    return !(total_hi < RatExt(key.total()));
  }
};

/// Series in up to three variables with per-variable support bounds, a trust
/// region (where absent coefficients are exactly zero), and log-power caps.
/// Terms outside the trust region are never stored, so truncated assemblies
/// cannot leak partial coefficients.
template <class C>
class MultiSeries {
public:
  /// Fully trusted series; support bounds grow with each added term.
  static MultiSeries exact() {
    MultiSeries m;
    m.auto_support_ = true;
    for (int i = 0; i < 3; ++i) {
      m.slo_[i] = RatExt::pos_inf();  // empty support until terms arrive
      m.shi_[i] = RatExt::neg_inf();
      m.thi_[i] = RatExt::pos_inf();
    }
    m.stot_lo_ = RatExt::pos_inf();
    m.stot_hi_ = RatExt::neg_inf();
    m.ttot_hi_ = RatExt::pos_inf();
    return m;
  }

  /// Builder-supplied support and trust metadata; the support arrays must
  /// bound the true mathematical object, not just the stored terms.
  static MultiSeries windowed(std::array<RatExt, 3> slo, std::array<RatExt, 3> shi,
                              std::array<RatExt, 3> thi, RatExt stot_lo, RatExt stot_hi,
                              RatExt ttot_hi, std::array<int, 3> log_caps = {0, 0, 0}) {
    MultiSeries m;
    m.auto_support_ = false;
    m.slo_ = std::move(slo);
    m.shi_ = std::move(shi);
    m.thi_ = std::move(thi);
    m.stot_lo_ = std::move(stot_lo);
    m.stot_hi_ = std::move(stot_hi);
    m.ttot_hi_ = std::move(ttot_hi);
    m.K_ = log_caps;
    return m;
  }

  const std::map<MKey, C>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int log_cap(int v) const { return K_[v]; }
  const RatExt& support_lo(int v) const { return slo_[v]; }
  const RatExt& support_hi(int v) const { return shi_[v]; }
  const RatExt& trust_hi(int v) const { return thi_[v]; }
  const RatExt& total_trust_hi() const { return ttot_hi_; }

  bool trusted(const MKey& key) const {
    for (int i = 0; i < 3; ++i)
      if (thi_[i] < RatExt(key.e[i].value())) return false;
    return !(ttot_hi_ < RatExt(key.total()));
  }

  /// Accumulates a term; drops anything outside the trust region.
  void add(const MKey& key, const C& c) {
    if (c.is_zero()) return;
    for (int i = 0; i < 3; ++i) {
      if (key.k[i] < 0) throw TwistError("PreconditionViolated", "negative log power");
      if (key.k[i] > K_[i])
        throw TwistError("PreconditionViolated", "log power exceeds cap in x" + std::to_string(i));
    }
    if (!trusted(key)) return;
    if (auto_support_) {
      for (int i = 0; i < 3; ++i) {
        RatExt v{key.e[i].value()};
        slo_[i] = ext_min(slo_[i], v);
        shi_[i] = ext_max(shi_[i], v);
      }
      RatExt tv{key.total()};
      stot_lo_ = ext_min(stot_lo_, tv);
      stot_hi_ = ext_max(stot_hi_, tv);
    } else {
      for (int i = 0; i < 3; ++i) {
        RatExt v{key.e[i].value()};
        if (v < slo_[i] || shi_[i] < v)
          throw TwistError("PreconditionViolated",
                           "term outside declared support: " + key.str());
      }
      RatExt tv{key.total()};
      if (tv < stot_lo_ || stot_hi_ < tv)
        throw TwistError("PreconditionViolated",
                         "term outside declared total support: " + key.str());
    }
    auto it = t_.find(key);
    if (it == t_.end()) {
      t_.emplace(key, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  const C& coeff(const MKey& key) const {
    static const C zero{};
    if (!trusted(key))
      throw TwistError("TableIncomplete", "coefficient outside trust region: " + key.str());
    auto it = t_.find(key);
    return it == t_.end() ? zero : it->second;
  }

  MultiSeries scaled(const Scalar& s) const {
    MultiSeries out = metadata_like(*this);
    if (s.is_zero()) return out;
    for (const auto& [key, c] : t_) out.add(key, c * s);
    return out;
  }

  friend MultiSeries operator+(const MultiSeries& a, const MultiSeries& b) {
    MultiSeries out;
    out.auto_support_ = a.auto_support_ && b.auto_support_;
    for (int i = 0; i < 3; ++i) {
      out.slo_[i] = ext_min(a.slo_[i], b.slo_[i]);
      out.shi_[i] = ext_max(a.shi_[i], b.shi_[i]);
      out.thi_[i] = ext_min(a.thi_[i], b.thi_[i]);
      out.K_[i] = std::max(a.K_[i], b.K_[i]);
    }
    out.stot_lo_ = ext_min(a.stot_lo_, b.stot_lo_);
    out.stot_hi_ = ext_max(a.stot_hi_, b.stot_hi_);
    out.ttot_hi_ = ext_min(a.ttot_hi_, b.ttot_hi_);
    for (const auto& [key, c] : a.t_) out.add(key, c);
    for (const auto& [key, c] : b.t_) out.add(key, c);
    return out;
  }
  friend MultiSeries operator-(const MultiSeries& a, const MultiSeries& b) {
    return a + b.scaled(Scalar(-1));
  }

  /// Multiplies by c x_v^s (log x_v)^dk.
  MultiSeries shifted(int v, const Rat& s, int dk = 0, const Scalar& c = Scalar(1)) const {
    MultiSeries out = metadata_like(*this);
    RatExt ds{s};
    out.slo_[v] = out.slo_[v] + ds;
    out.shi_[v] = out.shi_[v] + ds;
    out.thi_[v] = out.thi_[v] + ds;
    out.stot_lo_ = out.stot_lo_ + ds;
    out.stot_hi_ = out.stot_hi_ + ds;
    out.ttot_hi_ = out.ttot_hi_ + ds;
    out.K_[v] += dk;
    Exponent de = Exponent::from_value(s);
    for (const auto& [key, co] : t_) {
      MKey nk = key;
      nk.e[v] = nk.e[v] + de;
      nk.k[v] += dk;
      out.add(nk, co * c);
    }
    return out;
  }

private:
  bool support_empty() const {
    for (int i = 0; i < 3; ++i)
      if (shi_[i] < slo_[i]) return true;
    return stot_hi_ < stot_lo_;
  }

  static MultiSeries metadata_like(const MultiSeries& a) {
    MultiSeries m;
    m.auto_support_ = a.auto_support_;
    m.slo_ = a.slo_;
    m.shi_ = a.shi_;
    m.thi_ = a.thi_;
    m.stot_lo_ = a.stot_lo_;
    m.stot_hi_ = a.stot_hi_;
    m.ttot_hi_ = a.ttot_hi_;
    m.K_ = a.K_;
    return m;
  }

public:
  /// Product with sound trust propagation: a monomial of the product is
  /// trusted only when every contributing split lies in both factors' trust
  /// regions, derived from the declared support bounds.
  friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
    if (a.support_empty() || b.support_empty()) {
      // one factor is identically zero on its claimed support
      MultiSeries out = exact();
      return out;
    }
    MultiSeries out;
    out.auto_support_ = a.auto_support_ && b.auto_support_;
    for (int i = 0; i < 3; ++i) {
      out.slo_[i] = a.slo_[i] + b.slo_[i];
      out.shi_[i] = a.shi_[i] + b.shi_[i];
      RatExt ca = a.shi_[i] <= a.thi_[i] ? RatExt::pos_inf() : a.thi_[i] + b.slo_[i];
      RatExt cb = b.shi_[i] <= b.thi_[i] ? RatExt::pos_inf() : b.thi_[i] + a.slo_[i];
      out.thi_[i] = ext_min(ca, cb);
      out.K_[i] = a.K_[i] + b.K_[i];
    }
    out.stot_lo_ = a.stot_lo_ + b.stot_lo_;
    out.stot_hi_ = a.stot_hi_ + b.stot_hi_;
    RatExt ta = a.stot_hi_ <= a.ttot_hi_ ? RatExt::pos_inf() : a.ttot_hi_ + b.stot_lo_;
    RatExt tb = b.stot_hi_ <= b.ttot_hi_ ? RatExt::pos_inf() : b.ttot_hi_ + a.stot_lo_;
    out.ttot_hi_ = ext_min(ta, tb);
    for (const auto& [ka, ca] : a.t_)
      for (const auto& [kb, cb] : b.t_) {
        MKey nk;
        for (int i = 0; i < 3; ++i) {
          nk.e[i] = ka.e[i] + kb.e[i];
          nk.k[i] = ka.k[i] + kb.k[i];
        }
        out.add(nk, ca * cb);
      }
    return out;
  }

  /// Extracts the total coefficient of x_v^{-1}: a series in the remaining
  /// variables. Log powers of x_v at exponent -1 raise LogResidueAmbiguity
  /// unless the log-inclusive convention is selected (those terms are full
  /// derivatives, so the convention drops them).
  MultiSeries residue(int v, bool log_inclusive = false) const {
    if (thi_[v] < RatExt(rat(-1)))
      throw TwistError("TableIncomplete", "residue exponent -1 beyond trust in x" + std::to_string(v));
    MultiSeries out = metadata_like(*this);
    out.t_.clear();
    out.slo_[v] = RatExt(Rat(0));
    out.shi_[v] = RatExt(Rat(0));
    out.thi_[v] = RatExt::pos_inf();
    out.K_[v] = 0;
    RatExt one{Rat(1)};
    out.stot_lo_ = stot_lo_ + one;
    out.stot_hi_ = stot_hi_ + one;
    out.ttot_hi_ = ttot_hi_ + one;
    if (auto_support_) {
      // recompute stored support below via add()
      out.slo_ = {RatExt::pos_inf(), RatExt::pos_inf(), RatExt::pos_inf()};
      out.shi_ = {RatExt::neg_inf(), RatExt::neg_inf(), RatExt::neg_inf()};
      out.stot_lo_ = RatExt::pos_inf();
      out.stot_hi_ = RatExt::neg_inf();
    }
    Exponent minus1 = Exponent::integer(-1);
    for (const auto& [key, c] : t_) {
      if (!(key.e[v] == minus1)) continue;
      if (key.k[v] > 0) {
        if (log_inclusive) continue;
        throw TwistError("LogResidueAmbiguity",
                         "residue in x" + std::to_string(v) + " with log term: " + key.str());
      }
      MKey nk = key;
      nk.e[v] = Exponent::integer(0);
      out.add(nk, c);
    }
    return out;
  }

  /// Substitutes x_from by x_to (the one-variable delta application):
  /// exponents and log powers of x_from migrate onto x_to.
  MultiSeries substitute(int from, int to) const {
    if (support_empty()) return exact();
    bool inf1 = !shi_[from].finite() && shi_[from].inf > 0 && slo_[to].inf < 0;
    bool inf2 = !shi_[to].finite() && shi_[to].inf > 0 && slo_[from].inf < 0;
    if (inf1 || inf2)
      throw TwistError("IllFormedProduct",
                       "substitution x" + std::to_string(from) + " -> x" + std::to_string(to) +
                           " sums infinitely many contributions per coefficient");
    MultiSeries out = metadata_like(*this);
    out.t_.clear();
    out.auto_support_ = false;
    out.slo_[to] = slo_[from] + slo_[to];
    out.shi_[to] = shi_[from] + shi_[to];
    RatExt c1 = shi_[from] <= thi_[from] ? RatExt::pos_inf() : thi_[from] + slo_[to];
    RatExt c2 = shi_[to] <= thi_[to] ? RatExt::pos_inf() : thi_[to] + slo_[from];
    out.thi_[to] = ext_min(c1, c2);
    out.K_[to] = K_[from] + K_[to];
    out.slo_[from] = RatExt(Rat(0));
    out.shi_[from] = RatExt(Rat(0));
    out.thi_[from] = RatExt::pos_inf();
    out.K_[from] = 0;
    for (const auto& [key, c] : t_) {
      MKey nk = key;
      nk.e[to] = key.e[from] + key.e[to];
      nk.k[to] = key.k[from] + key.k[to];
      nk.e[from] = Exponent::integer(0);
      nk.k[from] = 0;
      out.add(nk, c);
    }
    return out;
  }

  /// Throws TableIncomplete unless the window lies inside the trust region.
  void require_window(const Window& w) const {
    for (int i = 0; i < 3; ++i)
      if (thi_[i] < w.hi[i])
        throw TwistError("TableIncomplete", "window exceeds trust in x" + std::to_string(i) +
                                                ": " + w.hi[i].str() + " > " + thi_[i].str());
    if (ttot_hi_ < w.total_hi)
      throw TwistError("TableIncomplete", "window exceeds total-degree trust: " +
                                              w.total_hi.str() + " > " + ttot_hi_.str());
  }

private:
  std::map<MKey, C> t_;
  std::array<RatExt, 3> slo_{}, shi_{}, thi_{};
  RatExt stot_lo_, stot_hi_, ttot_hi_;
  std::array<int, 3> K_{0, 0, 0};
  bool auto_support_ = true;
};

/// First trusted mismatch between a and b inside the window, or nullopt when
/// they agree there. Both trust regions must contain the window.
template <class C>
std::optional<MKey> first_mismatch(const MultiSeries<C>& a, const MultiSeries<C>& b,
                                   const Window& w) {
  a.require_window(w);
  b.require_window(w);
  std::map<MKey, int> keys;
  for (const auto& [key, c] : a.terms()) keys.emplace(key, 0);
  for (const auto& [key, c] : b.terms()) keys.emplace(key, 0);
  for (const auto& [key, unused] : keys) {
    if (!w.contains(key)) continue;
    if (!(a.coeff(key) == b.coeff(key))) return key;
  }
  return std::nullopt;
}

/// iota-expansion of (ca x_a + cb x_b)^n in nonnegative powers of the
/// second-listed variable x_b. Nonnegative integer n yields the finite,
/// fully trusted expansion; otherwise terms run to j <= jmax and the trust
/// region records the truncation. Fractional n requires ca = 1.
inline MultiSeries<Scalar> iota_expand(int var_a, int var_b, const Rat& n, const Rat& ca,
                                       const Rat& cb, long jmax) {
  using exactalg::rat_binom;
  using exactalg::rat_is_int;
  using exactalg::rat_pow;
  using exactalg::rat_to_long;
  bool finite = rat_is_int(n) && n >= 0;
  if (!rat_is_int(n) && ca != 1)
    throw TwistError("PreconditionViolated", "fractional power needs leading coefficient 1");
  MultiSeries<Scalar> out;
  if (finite) {
    out = MultiSeries<Scalar>::exact();
    jmax = rat_to_long(n);
  } else {
    std::array<RatExt, 3> slo{RatExt(Rat(0)), RatExt(Rat(0)), RatExt(Rat(0))};
    std::array<RatExt, 3> shi{RatExt(Rat(0)), RatExt(Rat(0)), RatExt(Rat(0))};
    std::array<RatExt, 3> thi{RatExt::pos_inf(), RatExt::pos_inf(), RatExt::pos_inf()};
    slo[var_a] = RatExt::neg_inf();
    shi[var_a] = RatExt(n);
    slo[var_b] = RatExt(Rat(0));
    shi[var_b] = RatExt::pos_inf();
    thi[var_b] = RatExt(rat(jmax));
    out = MultiSeries<Scalar>::windowed(slo, shi, thi, RatExt(n), RatExt(n), RatExt::pos_inf());
  }
  for (long j = 0; j <= jmax; ++j) {
    Rat coeff = rat_binom(n, j) * rat_pow(cb, j);
    if (rat_is_int(n)) coeff *= rat_pow(ca, rat_to_long(n) - j);
    MKey key;
    key.e[var_a] = Exponent::from_value(n - j);
    key.e[var_b] = Exponent::integer(j);
    out.add(key, Scalar(coeff));
  }
  return out;
}

/// (1 + x_small/x_big)^L for a graded operator exponent: the terms are
/// binom(L, j) x_big^{-j} x_small^j up to j <= jmax.
inline MultiSeries<GradedOperator> iota_expand_op(int var_big, int var_small,
                                                  const GradedOperator& L, long jmax) {
  std::array<RatExt, 3> slo{RatExt(Rat(0)), RatExt(Rat(0)), RatExt(Rat(0))};
  std::array<RatExt, 3> shi{RatExt(Rat(0)), RatExt(Rat(0)), RatExt(Rat(0))};
  std::array<RatExt, 3> thi{RatExt::pos_inf(), RatExt::pos_inf(), RatExt::pos_inf()};
  slo[var_big] = RatExt::neg_inf();
  shi[var_big] = RatExt(Rat(0));
  slo[var_small] = RatExt(Rat(0));
  shi[var_small] = RatExt::pos_inf();
  thi[var_small] = RatExt(rat(jmax));
  auto out = MultiSeries<GradedOperator>::windowed(slo, shi, thi, RatExt(Rat(0)),
                                                   RatExt(Rat(0)), RatExt::pos_inf());
  for (long j = 0; j <= jmax; ++j) {
    MKey key;
    key.e[var_big] = Exponent::integer(-j);
    key.e[var_small] = Exponent::integer(j);
    out.add(key, operator_binomial(L, 0, j));
  }
  return out;
}

} // namespace twistcalc::logcalc
