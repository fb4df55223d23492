#pragma once

#include <optional>
#include <vector>

#include "scalar.hpp"

namespace twistcalc::exactalg {

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rat> {
  static bool is_zero(const Rat& x) { return x == 0; }
  static Rat one() { return Rat(1); }
  static Rat inv(const Rat& x) { return Rat(1) / x; }
};

template <>
struct FieldTraits<Cyclo> {
  static bool is_zero(const Cyclo& x) { return x.is_zero(); }
  static Cyclo one() { return Cyclo(Rat(1)); }
  static Cyclo inv(const Cyclo& x) { return x.inverse(); }
};

// Scalar is a ring, not a field: one() supports identity matrices but
// elimination over Mat<Scalar> will throw on any non-unit pivot.
template <>
struct FieldTraits<Scalar> {
  static bool is_zero(const Scalar& x) { return x.is_zero(); }
  static Scalar one() { return Scalar(1); }
  static Scalar inv(const Scalar& x) { return x.inverse(); }
};

/// Dense matrix over an exact coefficient type. Elimination routines require
/// FieldTraits<F>; ring-only types (Scalar) may still use the arithmetic.
template <class F>
struct Mat {
  int r = 0, c = 0;
  std::vector<F> a;

  Mat() = default;
  Mat(int rows, int cols) : r(rows), c(cols), a(static_cast<size_t>(rows) * cols) {}

  static Mat zero(int rows, int cols) { return Mat(rows, cols); }
  static Mat identity(int n);

  F& at(int i, int j) { return a[static_cast<size_t>(i) * c + j]; }
  const F& at(int i, int j) const { return a[static_cast<size_t>(i) * c + j]; }

  bool operator==(const Mat& o) const { return r == o.r && c == o.c && a == o.a; }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const auto& x : a)
      if (!(x == F())) return false;
    return true;
  }

  friend Mat operator+(const Mat& x, const Mat& y) {
    Mat m(x.r, x.c);
    for (size_t i = 0; i < x.a.size(); ++i) m.a[i] = x.a[i] + y.a[i];
    return m;
  }
  friend Mat operator-(const Mat& x, const Mat& y) {
    Mat m(x.r, x.c);
    for (size_t i = 0; i < x.a.size(); ++i) m.a[i] = x.a[i] - y.a[i];
    return m;
  }
  friend Mat operator*(const Mat& x, const Mat& y) {
    Mat m(x.r, y.c);
    for (int i = 0; i < x.r; ++i)
      for (int k = 0; k < x.c; ++k) {
        const F& v = x.at(i, k);
        if (v == F()) continue;
        for (int j = 0; j < y.c; ++j) m.at(i, j) += v * y.at(k, j);
      }
    return m;
  }

  Mat scaled(const F& s) const {
    Mat m(r, c);
    for (size_t i = 0; i < a.size(); ++i) m.a[i] = a[i] * s;
    return m;
  }

  Mat pow(unsigned e) const {
    Mat acc = identity(r), base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  std::vector<F> apply(const std::vector<F>& v) const {
    std::vector<F> out(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if (!(at(i, j) == F())) out[i] += at(i, j) * v[j];
    return out;
  }
};

template <class F>
Mat<F> Mat<F>::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = FieldTraits<F>::one();
  return m;
}

// Gauss-Jordan; returns rank, optionally reports pivot columns.
template <class F>
int rref_inplace(Mat<F>& m, std::vector<int>* pivots = nullptr) {
  int rank = 0;
  for (int col = 0; col < m.c && rank < m.r; ++col) {
    int p = -1;
    for (int i = rank; i < m.r; ++i)
      if (!FieldTraits<F>::is_zero(m.at(i, col))) { p = i; break; }
    if (p < 0) continue;
    for (int j = 0; j < m.c; ++j) std::swap(m.at(p, j), m.at(rank, j));
    F inv = FieldTraits<F>::inv(m.at(rank, col));
    for (int j = col; j < m.c; ++j) m.at(rank, j) = m.at(rank, j) * inv;
    for (int i = 0; i < m.r; ++i) {
      if (i == rank || FieldTraits<F>::is_zero(m.at(i, col))) continue;
      F f = m.at(i, col);
      for (int j = col; j < m.c; ++j) m.at(i, j) = m.at(i, j) - f * m.at(rank, j);
    }
    if (pivots) pivots->push_back(col);
    ++rank;
  }
  return rank;
}

template <class F>
int mat_rank(Mat<F> m) { return rref_inplace(m); }

template <class F>
std::vector<std::vector<F>> nullspace(Mat<F> m) {
  std::vector<int> pivots;
  int rank = rref_inplace(m, &pivots);
  std::vector<bool> is_pivot(static_cast<size_t>(m.c), false);
  for (int p : pivots) is_pivot[static_cast<size_t>(p)] = true;
  std::vector<std::vector<F>> basis;
  for (int free = 0; free < m.c; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    std::vector<F> v(static_cast<size_t>(m.c));
    v[static_cast<size_t>(free)] = FieldTraits<F>::one();
    for (int i = 0; i < rank; ++i)
      v[static_cast<size_t>(pivots[static_cast<size_t>(i)])] = F() - m.at(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class F>
std::optional<Mat<F>> mat_inverse(const Mat<F>& m) {
  if (m.r != m.c) return std::nullopt;
  Mat<F> aug(m.r, 2 * m.c);
  for (int i = 0; i < m.r; ++i) {
    for (int j = 0; j < m.c; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.c + i) = FieldTraits<F>::one();
  }
  std::vector<int> pivots;
  int rank = rref_inplace(aug, &pivots);
  if (rank < m.r) return std::nullopt;
  for (int i = 0; i < rank; ++i)
    if (pivots[static_cast<size_t>(i)] != i) return std::nullopt;
  Mat<F> inv(m.r, m.c);
  for (int i = 0; i < m.r; ++i)
    for (int j = 0; j < m.c; ++j) inv.at(i, j) = aug.at(i, m.c + j);
  return inv;
}

/// Incremental echelon row space over a field.
template <class F>
class RowSpan {
public:
  explicit RowSpan(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(rows_.size()); }

  /// Adds v to the span; returns true when the rank grows.
  bool add(std::vector<F> v) {
    if (!reduce(v)) return false;
    size_t pos = 0;
    int lead = lead_of(v);
    while (pos < rows_.size() && lead_[pos] < lead) ++pos;
    F inv = FieldTraits<F>::inv(v[static_cast<size_t>(lead)]);
    for (auto& x : v) x = x * inv;
    rows_.insert(rows_.begin() + static_cast<long>(pos), std::move(v));
    lead_.insert(lead_.begin() + static_cast<long>(pos), lead);
    return true;
  }

  bool contains(std::vector<F> v) const { return !reduce(v); }

private:
  int lead_of(const std::vector<F>& v) const {
    for (int j = 0; j < dim_; ++j)
      if (!FieldTraits<F>::is_zero(v[static_cast<size_t>(j)])) return j;
    return dim_;
  }

  // Reduces v against the stored rows; returns true if a nonzero residual remains.
  bool reduce(std::vector<F>& v) const {
    for (size_t i = 0; i < rows_.size(); ++i) {
      int l = lead_[i];
      if (FieldTraits<F>::is_zero(v[static_cast<size_t>(l)])) continue;
      F f = v[static_cast<size_t>(l)];
      for (int j = l; j < dim_; ++j)
        v[static_cast<size_t>(j)] = v[static_cast<size_t>(j)] - f * rows_[i][static_cast<size_t>(j)];
    }
    return lead_of(v) < dim_;
  }

  int dim_;
  std::vector<std::vector<F>> rows_; // echelon, leads strictly increasing
  std::vector<int> lead_;
};

/// Echelon span that remembers how each reduced row combines the original
/// generators, so members can be expressed over the generator list.
template <class F>
class SpanSolver {
public:
  explicit SpanSolver(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  int generators() const { return ngen_; }

  /// Appends a generator (kept even if dependent).
  void add(std::vector<F> v) {
    int idx = ngen_++;
    std::vector<F> combo(static_cast<size_t>(ngen_));
    for (auto& row : combos_) row.resize(static_cast<size_t>(ngen_));
    combo[static_cast<size_t>(idx)] = FieldTraits<F>::one();
    reduce(v, &combo);
    int lead = lead_of(v);
    if (lead >= dim_) return;
    F inv = FieldTraits<F>::inv(v[static_cast<size_t>(lead)]);
    for (auto& x : v) x = x * inv;
    for (auto& x : combo) x = x * inv;
    size_t pos = 0;
    while (pos < rows_.size() && lead_[pos] < lead) ++pos;
    rows_.insert(rows_.begin() + static_cast<long>(pos), std::move(v));
    combos_.insert(combos_.begin() + static_cast<long>(pos), std::move(combo));
    lead_.insert(lead_.begin() + static_cast<long>(pos), lead);
  }

  bool contains(std::vector<F> v) const {
    reduce(v, nullptr);
    return lead_of(v) >= dim_;
  }

  /// Coefficients over the original generators, or nullopt if v is outside.
  std::optional<std::vector<F>> express(std::vector<F> v) const {
    if (static_cast<int>(v.size()) != dim_) return std::nullopt;
    std::vector<F> coeff(static_cast<size_t>(ngen_));
    std::vector<F>* cp = &coeff;
    // reduce, accumulating combination coefficients
    for (size_t i = 0; i < rows_.size(); ++i) {
      int l = lead_[i];
      if (FieldTraits<F>::is_zero(v[static_cast<size_t>(l)])) continue;
      F f = v[static_cast<size_t>(l)];
      for (int j = l; j < dim_; ++j)
        v[static_cast<size_t>(j)] = v[static_cast<size_t>(j)] - f * rows_[i][static_cast<size_t>(j)];
      for (size_t k = 0; k < combos_[i].size(); ++k)
        (*cp)[k] = (*cp)[k] + f * combos_[i][k];
    }
    if (lead_of(v) < dim_) return std::nullopt;
    return coeff;
  }

private:
  int lead_of(const std::vector<F>& v) const {
    for (int j = 0; j < dim_; ++j)
      if (!FieldTraits<F>::is_zero(v[static_cast<size_t>(j)])) return j;
    return dim_;
  }

  void reduce(std::vector<F>& v, std::vector<F>* combo) const {
    for (size_t i = 0; i < rows_.size(); ++i) {
      int l = lead_[i];
      if (FieldTraits<F>::is_zero(v[static_cast<size_t>(l)])) continue;
      F f = v[static_cast<size_t>(l)];
      for (int j = l; j < dim_; ++j)
        v[static_cast<size_t>(j)] = v[static_cast<size_t>(j)] - f * rows_[i][static_cast<size_t>(j)];
      if (combo)
        for (size_t k = 0; k < combos_[i].size(); ++k)
          (*combo)[k] = (*combo)[k] - f * combos_[i][k];
    }
  }

  int dim_;
  int ngen_ = 0;
  std::vector<std::vector<F>> rows_;
  std::vector<std::vector<F>> combos_;
  std::vector<int> lead_;
};

// Scalar matrices <-> cyclotomic matrices (tau-free direction is checked).
inline Mat<Cyclo> mat_to_cyclo(const Mat<Scalar>& m) {
  Mat<Cyclo> out(m.r, m.c);
  for (size_t i = 0; i < m.a.size(); ++i) out.a[i] = m.a[i].cyclo_value();
  return out;
}

inline Mat<Scalar> mat_to_scalar(const Mat<Cyclo>& m) {
  Mat<Scalar> out(m.r, m.c);
  for (size_t i = 0; i < m.a.size(); ++i) out.a[i] = Scalar(m.a[i]);
  return out;
}

} // namespace twistcalc::exactalg
