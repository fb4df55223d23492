#pragma once

#include <map>
#include <utility>

#include "exponent.hpp"
#include "scalar.hpp"

namespace twistcalc::logcalc {

using exactalg::Scalar;

/// e^{2 pi i e} for a rational exponent e, as an exact root of unity.
inline Scalar unit_phase(const Exponent& e, int sign = 1) {
  // depends only on the coset p/q: the phase is zeta_q^p
  long q = e.coset.get_den().get_si();
  long p = e.coset.get_num().get_si();
  return Scalar::root(static_cast<unsigned>(q), sign >= 0 ? p : q - p);
}

/// One-variable series sum c_{e,k} x^e (log x)^k with rational exponents and
/// bounded log powers. Carries a completeness frontier: every coefficient at
/// exponent value <= frontier is stored exactly (absent means zero); terms
/// beyond the frontier are never stored, so truncated assemblies stay honest.
template <class C>
class LogSeries {
public:
  using Key = std::pair<Exponent, int>;

  explicit LogSeries(int log_cap = 0, RatExt frontier = RatExt::pos_inf())
      : K_(log_cap), thi_(std::move(frontier)) {}

  int log_cap() const { return K_; }
  const RatExt& frontier() const { return thi_; }
  const std::map<Key, C>& terms() const { return t_; }

  bool is_zero() const { return t_.empty(); }

  /// Accumulates a term; silently drops exponents beyond the frontier.
  void add(const Exponent& e, int k, const C& c) {
    if (c.is_zero()) return;
    if (k < 0) throw TwistError("PreconditionViolated", "negative log power");
    if (k > K_) throw TwistError("PreconditionViolated", "log power exceeds cap");
    if (thi_ < RatExt(e.value())) return;
    auto it = t_.find({e, k});
    if (it == t_.end()) {
      t_.emplace(Key{e, k}, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  /// Trusted coefficient lookup: absent within the frontier is zero.
  const C& coeff(const Exponent& e, int k) const {
    static const C zero{};
    if (RatExt(e.value()) < thi_ || RatExt(e.value()) == thi_) {
      auto it = t_.find({e, k});
      return it == t_.end() ? zero : it->second;
    }
    throw TwistError("TableIncomplete",
                     "coefficient at x^" + e.str() + " log^" + std::to_string(k) +
                         " lies beyond the completeness frontier " + thi_.str());
  }

  bool trusted(const Exponent& e) const { return RatExt(e.value()) <= thi_; }

  LogSeries scaled(const Scalar& s) const {
    LogSeries out(K_, thi_);
    if (s.is_zero()) return out;
    for (const auto& [key, c] : t_) out.add(key.first, key.second, c * s);
    return out;
  }

  friend LogSeries operator+(const LogSeries& a, const LogSeries& b) {
    LogSeries out(std::max(a.K_, b.K_), ext_min(a.thi_, b.thi_));
    for (const auto& [key, c] : a.t_) out.add(key.first, key.second, c);
    for (const auto& [key, c] : b.t_) out.add(key.first, key.second, c);
    return out;
  }
  friend LogSeries operator-(const LogSeries& a, const LogSeries& b) {
    return a + b.scaled(Scalar(-1));
  }

  /// Multiplies by c x^s (log x)^dk.
  LogSeries shifted(const Exponent& s, int dk = 0, const Scalar& c = Scalar(1)) const {
    LogSeries out(K_ + dk, thi_ + RatExt(s.value()));
    for (const auto& [key, co] : t_) out.add(key.first + s, key.second + dk, co * c);
    return out;
  }

  /// d/dx = partial_x + x^{-1} partial_{log x}.
  LogSeries full_derivative() const {
    LogSeries out(K_, thi_ - RatExt(Rat(1)));
    for (const auto& [key, c] : t_) {
      const auto& [e, k] = key;
      out.add(e - 1, k, c * Scalar(e.value()));
      if (k > 0) out.add(e - 1, k - 1, c * Scalar(rat(k)));
    }
    return out;
  }

  /// partial_x alone (exponent rule, logs untouched).
  LogSeries partial_x() const {
    LogSeries out(K_, thi_ - RatExt(Rat(1)));
    for (const auto& [key, c] : t_)
      out.add(key.first - 1, key.second, c * Scalar(key.first.value()));
    return out;
  }

  /// partial_{log x} alone.
  LogSeries partial_log() const {
    LogSeries out(K_, thi_);
    for (const auto& [key, c] : t_)
      if (key.second > 0) out.add(key.first, key.second - 1, c * Scalar(rat(key.second)));
    return out;
  }

  /// x^e (log x)^k -> e^{2 pi i e} x^e (log x + 2 pi i)^k.
  LogSeries monodromy() const { return phase_twisted(1).log_translated(1); }

  /// e^{+-2 pi i x d/dx}: multiplies the (e,k) term by e^{+-2 pi i e}.
  LogSeries exp_x_dx(int sign) const { return phase_twisted(sign); }

  /// e^{+-2 pi i d/d(log x)}: log x -> log x +- 2 pi i.
  LogSeries exp_dlog(int sign) const { return log_translated(sign); }

  LogSeries set_log_zero() const {
    LogSeries out(K_, thi_);
    for (const auto& [key, c] : t_)
      if (key.second == 0) out.add(key.first, 0, c);
    return out;
  }

  /// Total coefficient of x^{-1}. Log powers at exponent -1 are ambiguous
  /// under integration by parts; the log-inclusive convention takes the
  /// (log x)^0 coefficient (the k >= 1 terms are full derivatives).
  C residue(bool log_inclusive = false) const {
    Exponent minus1 = Exponent::integer(-1);
    if (!trusted(minus1))
      throw TwistError("TableIncomplete", "residue exponent -1 beyond frontier");
    if (!log_inclusive) {
      for (int k = 1; k <= K_; ++k) {
        auto it = t_.find({minus1, k});
        if (it != t_.end() && !it->second.is_zero())
          throw TwistError("LogResidueAmbiguity",
                           "residue with log^" + std::to_string(k) +
                               " term present and no convention selected");
      }
    }
    auto it = t_.find({minus1, 0});
    return it == t_.end() ? C{} : it->second;
  }

  bool operator==(const LogSeries& o) const { return thi_ == o.thi_ && t_ == o.t_; }
  bool operator!=(const LogSeries& o) const { return !(*this == o); }

private:
  LogSeries phase_twisted(int sign) const {
    LogSeries out(K_, thi_);
    for (const auto& [key, c] : t_)
      out.add(key.first, key.second, c * unit_phase(key.first, sign));
    return out;
  }

  // (log x)^k -> (log x + sign * 2 pi i)^k, expanded binomially.
  LogSeries log_translated(int sign) const {
    LogSeries out(K_, thi_);
    for (const auto& [key, c] : t_) {
      const auto& [e, k] = key;
      for (int j = 0; j <= k; ++j) {
        Scalar f = Scalar(exactalg::rat_binom(rat(k), k - j)) * Scalar::two_pi_i(k - j);
        if (sign < 0 && (k - j) % 2 == 1) f = -f;
        out.add(e, j, c * f);
      }
    }
    return out;
  }

  std::map<Key, C> t_;
  int K_;
  RatExt thi_;
};

} // namespace twistcalc::logcalc
