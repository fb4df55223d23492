#pragma once

#include <map>
#include <set>

#include "errors.hpp"
#include "matrix.hpp"

namespace twistcalc::exactalg {

/// Weight-preserving operator on a graded space: one square block per weight.
/// A weight absent from the block map acts as zero there; all callers that
/// build automorphisms populate every weight up to the cutoff.
class GradedOperator {
public:
  GradedOperator() = default;

  void set_block(int w, Mat<Scalar> m) {
    if (m.r != m.c) throw TwistError("PreconditionViolated", "graded block must be square");
    blocks_[w] = std::move(m);
  }

  const std::map<int, Mat<Scalar>>& blocks() const { return blocks_; }

  bool has_block(int w) const { return blocks_.count(w) != 0; }

  const Mat<Scalar>& block(int w) const {
    auto it = blocks_.find(w);
    if (it == blocks_.end())
      throw TwistError("PreconditionViolated", "no block at weight " + std::to_string(w));
    return it->second;
  }

  bool is_zero() const {
    for (const auto& [w, m] : blocks_)
      if (!m.is_zero()) return false;
    return true;
  }

  bool operator==(const GradedOperator& o) const {
    for (const auto& [w, m] : blocks_) {
      auto it = o.blocks_.find(w);
      if (it == o.blocks_.end()) {
        if (!m.is_zero()) return false;
      } else if (!(m == it->second)) {
        return false;
      }
    }
    for (const auto& [w, m] : o.blocks_)
      if (!blocks_.count(w) && !m.is_zero()) return false;
    return true;
  }
  bool operator!=(const GradedOperator& o) const { return !(*this == o); }

  friend GradedOperator operator+(const GradedOperator& x, const GradedOperator& y) {
    GradedOperator out = x;
    for (const auto& [w, m] : y.blocks_) {
      auto it = out.blocks_.find(w);
      if (it == out.blocks_.end()) {
        out.blocks_[w] = m;
      } else {
        if (it->second.r != m.r)
          throw TwistError("IllFormedProduct", "block size mismatch at weight " + std::to_string(w));
        it->second = it->second + m;
      }
    }
    return out;
  }

  friend GradedOperator operator-(const GradedOperator& x, const GradedOperator& y) {
    return x + y.scaled(Scalar(-1));
  }

  // Product is defined on the common support; a one-sided block means the
  // other factor is zero there, so the product block is zero and is dropped.
  friend GradedOperator operator*(const GradedOperator& x, const GradedOperator& y) {
    GradedOperator out;
    for (const auto& [w, m] : x.blocks_) {
      auto it = y.blocks_.find(w);
      if (it == y.blocks_.end()) continue;
      if (m.c != it->second.r)
        throw TwistError("IllFormedProduct", "block size mismatch at weight " + std::to_string(w));
      out.blocks_[w] = m * it->second;
    }
    return out;
  }

  GradedOperator scaled(const Scalar& s) const {
    GradedOperator out;
    for (const auto& [w, m] : blocks_) out.blocks_[w] = m.scaled(s);
    return out;
  }

  friend GradedOperator operator*(const GradedOperator& g, const Scalar& s) {
    return g.scaled(s);
  }

  GradedOperator mul_tau(int p) const {
    return scaled(Scalar::tau(p));
  }

  /// Identity on the same support.
  GradedOperator identity_like() const {
    GradedOperator out;
    for (const auto& [w, m] : blocks_) out.blocks_[w] = Mat<Scalar>::identity(m.r);
    return out;
  }

  GradedOperator pow(unsigned e) const {
    GradedOperator acc = identity_like(), base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  std::vector<Scalar> apply(int w, const std::vector<Scalar>& v) const {
    return block(w).apply(v);
  }

private:
  std::map<int, Mat<Scalar>> blocks_;
};

/// binom(m + A, j) = (m + A)(m + A - 1)...(m + A - j + 1) / j!, blockwise.
/// Off-support weights are implicitly binom(m, j) times the identity.
inline GradedOperator operator_binomial(const GradedOperator& a, long m, long j) {
  if (j < 0) throw TwistError("PreconditionViolated", "binomial needs j >= 0");
  GradedOperator out;
  for (const auto& [w, blk] : a.blocks()) {
    Mat<Scalar> acc = Mat<Scalar>::identity(blk.r);
    for (long i = 0; i < j; ++i) {
      Mat<Scalar> shifted = blk + Mat<Scalar>::identity(blk.r).scaled(Scalar(m - i));
      acc = acc * shifted;
    }
    out.set_block(w, acc.scaled(Scalar(Rat(1) / rat_factorial(j))));
  }
  return out;
}

struct JordanResult {
  GradedOperator S;    // semisimple exponent part: eigenvalue alpha on the
                       // zeta_T^(T alpha) generalized eigenspace
  GradedOperator N;    // nilpotent exponent part, a tau-multiple of a
                       // rational-spectrum nilpotent
  GradedOperator sem;  // semisimple factor of g
  GradedOperator unip; // unipotent factor of g; g = sem * unip = unip * sem
  std::set<Rat> spectrum;   // S-eigenvalues, all in [0, 1)
  int max_log_power = 0;    // nilpotency index of N minus one
};

/// Multiplicative Jordan decomposition of a finite-order-semisimple-part
/// automorphism block structure: g = sem * unip with g^T unipotent.
/// Writes g = exp(2 pi i (S + N)) with S rational-semisimple and N nilpotent.
inline JordanResult jordan_chevalley(const GradedOperator& g, unsigned T) {
  if (T == 0) throw TwistError("PreconditionViolated", "order T must be positive");
  JordanResult jr;
  int global_nilp = 0;
  for (const auto& [w, blk] : g.blocks()) {
    const int n = blk.r;
    Mat<Cyclo> gm = mat_to_cyclo(blk);
    if (!mat_inverse(gm))
      throw TwistError("NonInvertible", "automorphism block at weight " + std::to_string(w) +
                                            " is singular");
    Mat<Cyclo> u = gm.pow(T);
    Mat<Cyclo> id = Mat<Cyclo>::identity(n);
    if (!(u - id).pow(static_cast<unsigned>(n)).is_zero())
      throw TwistError("NonRootOfUnitySpectrum",
                       "g^T is not unipotent at weight " + std::to_string(w));

    // Generalized eigenspaces for the T-th roots of unity, in spectral order.
    Mat<Cyclo> p(n, n);
    std::vector<unsigned> col_k(static_cast<size_t>(n));
    int col = 0;
    for (unsigned k = 0; k < T; ++k) {
      Mat<Cyclo> shifted = gm - id.scaled(Cyclo::root(T, k));
      for (const auto& v : nullspace(shifted.pow(static_cast<unsigned>(n)))) {
        if (col >= n)
          throw TwistError("NonRootOfUnitySpectrum", "eigenspace dimensions exceed block size");
        for (int i = 0; i < n; ++i) p.at(i, col) = v[static_cast<size_t>(i)];
        col_k[static_cast<size_t>(col)] = k;
        ++col;
      }
    }
    if (col != n)
      throw TwistError("NonRootOfUnitySpectrum",
                       "generalized eigenspaces do not fill the block at weight " +
                           std::to_string(w));
    auto pinv_opt = mat_inverse(p);
    if (!pinv_opt)
      throw TwistError("PreconditionViolated", "eigenbasis assembly failed");
    const Mat<Cyclo>& pinv = *pinv_opt;

    Mat<Cyclo> ds(n, n), dg(n, n);
    for (int i = 0; i < n; ++i) {
      unsigned k = col_k[static_cast<size_t>(i)];
      ds.at(i, i) = Cyclo(rat(static_cast<long>(k), static_cast<long>(T)));
      dg.at(i, i) = Cyclo::root(T, k);
      jr.spectrum.insert(rat(static_cast<long>(k), static_cast<long>(T)));
    }
    Mat<Cyclo> s = p * ds * pinv;
    Mat<Cyclo> sem = p * dg * pinv;
    Mat<Cyclo> unip = *mat_inverse(sem) * gm;

    // R = log(unip), a terminating series since unip - id is nilpotent.
    Mat<Cyclo> x = unip - id;
    Mat<Cyclo> r(n, n);
    Mat<Cyclo> xp = x;
    int nilp = 0;
    for (int m = 1; m <= n; ++m) {
      if (xp.is_zero()) break;
      nilp = m;
      Rat coeff = Rat(m % 2 == 1 ? 1 : -1, m);
      Mat<Cyclo> term(n, n);
      for (size_t i = 0; i < xp.a.size(); ++i) term.a[i] = xp.a[i] * coeff;
      r = r + term;
      xp = xp * x;
    }
    global_nilp = std::max(global_nilp, nilp);

    if (!(sem * unip == gm))
      throw TwistError("PreconditionViolated", "jordan factor reconstruction failed");
    if (!(s * r == r * s))
      throw TwistError("PreconditionViolated", "jordan exponent parts do not commute");

    jr.S.set_block(w, mat_to_scalar(s));
    jr.sem.set_block(w, mat_to_scalar(sem));
    jr.unip.set_block(w, mat_to_scalar(unip));
    jr.N.set_block(w, mat_to_scalar(r).scaled(Scalar::tau(1)));
  }
  // Largest m with N^m nonzero, i.e. nilpotency index minus one.
  jr.max_log_power = global_nilp;
  if (jr.spectrum.empty()) jr.spectrum.insert(Rat(0));
  return jr;
}

} // namespace twistcalc::exactalg
