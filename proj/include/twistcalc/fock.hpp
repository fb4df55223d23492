#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "voa.hpp"

namespace twistcalc::examples {

using exactalg::Rat;
using exactalg::rat;
using exactalg::Scalar;
using voa::BRef;
using voa::Vec;

/// Multi-species bosonic oscillator space over a rational Gram form.
/// Parts are stored in scaled units: a part value n stands for the mode
/// -n/denom, and only n with n % denom == residue are allowed. The plain
/// Heisenberg algebra uses denom 1, residue 0; half-integer (twisted)
/// oscillators use denom 2, residue 1.
struct FockSpec {
  int species = 1;
  std::vector<std::vector<Rat>> gram;
  std::vector<std::string> names;
  int denom = 1;
  int residue = 0;
};

/// A part is (scaled value, species); states are sorted descending by
/// (value, then species ascending preferred first).
using Part = std::pair<int, int>;
using State = std::vector<Part>;

inline bool part_before(const Part& a, const Part& b) {
  if (a.first != b.first) return a.first > b.first;
  return a.second < b.second;
}

inline void sort_state(State& s) { std::sort(s.begin(), s.end(), part_before); }

struct FockBasis {
  FockSpec spec;
  int w_max = 0;  // scaled weight cutoff
  std::vector<std::vector<State>> states;      // per scaled weight
  std::vector<std::map<State, int>> index;

  static FockBasis build(FockSpec spec, int w_max) {
    FockBasis b;
    b.spec = std::move(spec);
    b.w_max = w_max;
    b.states.resize(static_cast<size_t>(w_max) + 1);
    b.index.resize(static_cast<size_t>(w_max) + 1);
    State cur;
    b.gen(0, w_max, w_max, b.spec.species, cur);
    // gen emits in weight-grouped recursive order; regroup per weight
    for (int w = 0; w <= w_max; ++w)
      for (int i = 0; i < static_cast<int>(b.states[static_cast<size_t>(w)].size()); ++i)
        b.index[static_cast<size_t>(w)].emplace(b.states[static_cast<size_t>(w)][static_cast<size_t>(i)], i);
    return b;
  }

  int dim(int w) const {
    return (w >= 0 && w <= w_max) ? static_cast<int>(states[static_cast<size_t>(w)].size()) : 0;
  }

  BRef ref_of(const State& s) const {
    int w = 0;
    for (const Part& p : s) w += p.first;
    auto it = index[static_cast<size_t>(w)].find(s);
    if (it == index[static_cast<size_t>(w)].end())
      throw TwistError("PreconditionViolated", "state not in basis");
    return {w, it->second};
  }

  const State& state_of(const BRef& b) const {
    return states[static_cast<size_t>(b.first)][static_cast<size_t>(b.second)];
  }

  bool part_allowed(int n) const {
    return n >= 1 && (n % spec.denom + spec.denom) % spec.denom == spec.residue % spec.denom;
  }

  /// True mode value of a scaled part.
  Rat mode_of(int n) const { return rat(n, spec.denom); }

  std::string name_of(const BRef& b) const {
    const State& s = state_of(b);
    if (s.empty()) return "1";
    std::string out;
    for (const Part& p : s) {
      out += spec.names[static_cast<size_t>(p.second)] + "(-";
      if (p.first % spec.denom == 0) {
        out += std::to_string(p.first / spec.denom);
      } else {
        out += std::to_string(p.first) + "/" + std::to_string(spec.denom);
      }
      out += ")";
    }
    return out + "1";
  }

  /// Creation a_s(-n/denom): prepend the part (coefficient 1).
  Vec create(int n, int s, const Vec& v) const {
    Vec out;
    for (const auto& [b, coef] : v.c) {
      State st = state_of(b);
      st.push_back({n, s});
      sort_state(st);
      int w = b.first + n;
      if (w > w_max)
        throw TwistError("TableIncomplete", "creation exits the Fock cutoff");
      out.accum(ref_of(st), coef);
    }
    return out;
  }

  /// Annihilation a_s(n/denom), n >= 1: contract against matching parts.
  Vec annihilate(int n, int s, const Vec& v) const {
    Vec out;
    for (const auto& [b, coef] : v.c) {
      const State& st = state_of(b);
      for (size_t i = 0; i < st.size(); ++i) {
        if (i > 0 && st[i] == st[i - 1]) continue;  // handled with multiplicity
        if (st[i].first != n) continue;
        Rat pairing = spec.gram[static_cast<size_t>(s)][static_cast<size_t>(st[i].second)];
        if (pairing == 0) continue;
        int mult = 0;
        for (const Part& p : st)
          if (p == st[i]) ++mult;
        State rest;
        bool removed = false;
        for (const Part& p : st) {
          if (!removed && p == st[i]) {
            removed = true;
            continue;
          }
          rest.push_back(p);
        }
        out.accum(ref_of(rest), coef * (rat(mult) * mode_of(n) * pairing));
      }
    }
    return out;
  }

 private:
  void gen(int w, int budget, int cap_n, int cap_s_excl, State& cur) {
    states[static_cast<size_t>(w)].push_back(cur);
    for (int n = std::min(budget, cap_n); n >= 1; --n) {
      if (!part_allowed(n)) continue;
      int s_start = (n == cap_n) ? (spec.species - cap_s_excl) : 0;
      for (int s = s_start; s < spec.species; ++s) {
        cur.push_back({n, s});
        gen(w + n, budget - n, n, spec.species - s, cur);
        cur.pop_back();
      }
    }
  }
};

/// Untwisted vertex algebra products on a Heisenberg Fock space via the
/// iterate recursion: peel the largest oscillator a_s(-m) off u and expand
///   (a_s(-m)u')(n) = sum_j (-1)^j binom(-m,j)
///        [ a_s(-m-j) u'(n+j)  -  (-1)^m u'(-m+n-j) a_s(j) ]
/// applied to v, with both sums truncated by lower truncation.
class FockProductEngine {
 public:
  explicit FockProductEngine(FockBasis basis) : b_(std::move(basis)) {
    if (b_.spec.denom != 1)
      throw TwistError("PreconditionViolated",
                       "untwisted products need integer oscillator modes");
  }

  const FockBasis& basis() const { return b_; }

  Vec product(const BRef& u, long n, const BRef& v) {
    int w_res = u.first + v.first - static_cast<int>(n) - 1;
    if (w_res < 0) return Vec{};
    if (w_res > b_.w_max)
      throw TwistError("TableIncomplete", "product weight beyond Fock cutoff");
    auto key = std::make_tuple(u, n, v);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    Vec out;
    const State& us = b_.state_of(u);
    if (us.empty()) {
      out = (n == -1) ? Vec::unit(v) : Vec{};
    } else {
      int m = us[0].first, s = us[0].second;
      State rest(us.begin() + 1, us.end());
      BRef up = b_.ref_of(rest);
      int wu = up.first, wv = v.first;

      long j1 = static_cast<long>(wu) + wv - n - 1;
      for (long j = 0; j <= j1; ++j) {
        Vec inner = product(up, n + j, v);
        if (inner.is_zero()) continue;
        Rat coef = exactalg::rat_binom(rat(-m), j) * (j % 2 ? rat(-1) : rat(1));
        out = out + b_.create(m + static_cast<int>(j), s, inner) * Scalar(coef);
      }
      for (long j = 1; j <= wv; ++j) {
        Vec lowered = b_.annihilate(static_cast<int>(j), s, Vec::unit(v));
        if (lowered.is_zero()) continue;
        Vec inner;
        for (const auto& [lb, lc] : lowered.c) {
          Vec p = product(up, -m + n - j, lb);
          if (!p.is_zero()) inner = inner + p * lc;
        }
        Rat coef = exactalg::rat_binom(rat(-m), j) * (j % 2 ? rat(-1) : rat(1)) *
                   (m % 2 ? rat(1) : rat(-1));
        out = out + inner * Scalar(coef);
      }
    }
    memo_.emplace(std::move(key), out);
    return out;
  }

 private:
  FockBasis b_;
  std::map<std::tuple<BRef, long, BRef>, Vec> memo_;
};

/// Derivation of the Fock space induced by a linear map on the species
/// space: action[t][s] is the coefficient of species t in the image of s.
inline exactalg::GradedOperator species_derivation(const FockBasis& b,
                                                   const std::vector<std::vector<Rat>>& action) {
  exactalg::GradedOperator out;
  for (int w = 0; w <= b.w_max; ++w) {
    int d = b.dim(w);
    exactalg::Mat<Scalar> m = exactalg::Mat<Scalar>::zero(d, d);
    for (int i = 0; i < d; ++i) {
      const State& st = b.states[static_cast<size_t>(w)][static_cast<size_t>(i)];
      for (size_t pos = 0; pos < st.size(); ++pos) {
        for (int t = 0; t < b.spec.species; ++t) {
          Rat c = action[static_cast<size_t>(t)][static_cast<size_t>(st[pos].second)];
          if (c == 0) continue;
          State img = st;
          img[pos].second = t;
          sort_state(img);
          BRef r = b.ref_of(img);
          m.at(r.second, i) += Scalar(c);
        }
      }
    }
    out.set_block(w, std::move(m));
  }
  return out;
}

/// Diagonal operator scaling each state by factor^(number of parts).
inline exactalg::GradedOperator parity_operator(const FockBasis& b, const Rat& factor) {
  exactalg::GradedOperator out;
  for (int w = 0; w <= b.w_max; ++w) {
    int d = b.dim(w);
    exactalg::Mat<Scalar> m = exactalg::Mat<Scalar>::zero(d, d);
    for (int i = 0; i < d; ++i) {
      size_t parts = b.states[static_cast<size_t>(w)][static_cast<size_t>(i)].size();
      m.at(i, i) = Scalar(exactalg::rat_pow(factor, static_cast<long>(parts)));
    }
    out.set_block(w, std::move(m));
  }
  return out;
}

/// exp of a nilpotent graded operator, as a finite sum.
inline exactalg::GradedOperator exp_nilpotent(const exactalg::GradedOperator& a) {
  exactalg::GradedOperator out = a.identity_like();
  exactalg::GradedOperator pw = a.identity_like();
  Rat fact(1);
  for (int k = 1; k <= 64; ++k) {
    pw = pw * a;
    if (pw.is_zero()) return out;
    fact *= rat(k);
    out = out + pw.scaled(Scalar(Rat(1) / fact));
  }
  throw TwistError("PreconditionViolated", "exp_nilpotent: operator is not nilpotent");
}

} // namespace twistcalc::examples
