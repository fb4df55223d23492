#pragma once

#include <gmpxx.h>

#include <string>

#include "errors.hpp"

namespace twistcalc::exactalg {

/// Exact rational number. GMP keeps these canonical (reduced, positive
/// denominator) through arithmetic; only direct num/den construction needs
/// an explicit canonicalize.
using Rat = mpq_class;

inline Rat rat(long n, long d = 1) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline Rat rat_from_strings(const std::string& num, const std::string& den) {
  mpz_class n(num), d(den);
  if (d == 0) throw TwistError("BadInput", "zero denominator");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline bool rat_is_int(const Rat& r) { return r.get_den() == 1; }

inline long rat_to_long(const Rat& r) {
  if (!rat_is_int(r) || !r.get_num().fits_slong_p())
    throw TwistError("BadInput", "rational is not a small integer");
  return r.get_num().get_si();
}

/// floor(r) as a long; exponents and offsets stay desk-sized.
inline long rat_floor_long(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  if (!q.fits_slong_p()) throw TwistError("BadInput", "floor overflows long");
  return q.get_si();
}

inline Rat rat_floor(const Rat& r) { return Rat(rat_floor_long(r)); }

inline Rat rat_pow(const Rat& b, long e) {
  if (e < 0) {
    if (b == 0) throw TwistError("NonInvertible", "0^negative");
    return rat_pow(Rat(1) / b, -e);
  }
  Rat acc(1), base(b);
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

/// binom(top, j) = top (top-1) ... (top-j+1) / j! for rational top, j >= 0.
inline Rat rat_binom(const Rat& top, long j) {
  if (j < 0) return Rat(0);
  Rat acc(1);
  for (long i = 0; i < j; ++i) {
    acc *= top - Rat(i);
    acc /= Rat(i + 1);
  }
  return acc;
}

inline Rat rat_factorial(long n) {
  Rat acc(1);
  for (long i = 2; i <= n; ++i) acc *= Rat(i);
  return acc;
}

inline int rat_sign(const Rat& r) { return sgn(r); }

inline std::string rat_str(const Rat& r) { return r.get_str(); }

} // namespace twistcalc::exactalg
