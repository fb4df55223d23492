#include <catch2/catch_amalgamated.hpp>

#include <twistcalc/log_series.hpp>
#include <twistcalc/multi_series.hpp>

using namespace twistcalc::exactalg;
using namespace twistcalc::logcalc;

using LS = LogSeries<Scalar>;
using MS = MultiSeries<Scalar>;

static Exponent ev(const Rat& r) { return Exponent::from_value(r); }
static Exponent ei(long m) { return Exponent::integer(m); }

TEST_CASE("exponent coset/offset split") {
  Exponent e = ev(rat(-3, 2));
  REQUIRE(e.coset == rat(1, 2));
  REQUIRE(e.offset == -2);
  REQUIRE(e.value() == rat(-3, 2));
  REQUIRE(ev(rat(7, 3)) == Exponent(rat(1, 3), 2));
  REQUIRE(ei(4).is_integer());
  REQUIRE(!e.is_integer());
  REQUIRE((e + 2).value() == rat(1, 2));
  REQUIRE((e + ev(rat(1, 2))).value() == rat(-1));
  REQUIRE(ev(rat(1, 2)) < ev(rat(1)));
  REQUIRE(ei(1) < ev(rat(3, 2)));
  REQUIRE_THROWS_AS(Exponent(rat(3, 2), 0), TwistError);
}

TEST_CASE("log series derivative rules") {
  // d/dx (log x) = x^{-1}
  LS s(1);
  s.add(ei(0), 1, Scalar(1));
  LS d = s.full_derivative();
  REQUIRE(d.coeff(ei(-1), 0) == Scalar(1));
  REQUIRE(d.coeff(ei(-1), 1) == Scalar(0));

  // d/dx x^alpha = alpha x^{alpha-1}
  LS t(0);
  t.add(ev(rat(2, 3)), 0, Scalar(1));
  REQUIRE(t.full_derivative().coeff(ev(rat(-1, 3)), 0) == Scalar(rat(2, 3)));

  // d/dx (x^alpha log x) = alpha x^{alpha-1} log x + x^{alpha-1}
  LS u(1);
  u.add(ev(rat(2, 3)), 1, Scalar(1));
  LS du = u.full_derivative();
  REQUIRE(du.coeff(ev(rat(-1, 3)), 1) == Scalar(rat(2, 3)));
  REQUIRE(du.coeff(ev(rat(-1, 3)), 0) == Scalar(1));

  // partial_x alone misses the log-lowering term
  REQUIRE(u.partial_x().coeff(ev(rat(-1, 3)), 0) == Scalar(0));
  REQUIRE(u.partial_log().coeff(ev(rat(2, 3)), 0) == Scalar(1));
}

TEST_CASE("monodromy") {
  // integer exponents are fixed
  LS s(0);
  s.add(ei(5), 0, Scalar(1));
  s.add(ei(-2), 0, Scalar(rat(7)));
  REQUIRE(s.monodromy() == s);

  // x^{1/2} -> -x^{1/2}
  LS h(0);
  h.add(ev(rat(1, 2)), 0, Scalar(1));
  REQUIRE(h.monodromy().coeff(ev(rat(1, 2)), 0) == Scalar(-1));

  // x^{1/2} log x -> -x^{1/2} (log x + 2 pi i)
  LS hl(1);
  hl.add(ev(rat(1, 2)), 1, Scalar(1));
  LS m = hl.monodromy();
  REQUIRE(m.coeff(ev(rat(1, 2)), 1) == Scalar(-1));
  REQUIRE(m.coeff(ev(rat(1, 2)), 0) == -Scalar::two_pi_i(1));
}

static LS sample_series() {
  LS s(2);
  s.add(ev(rat(1, 3)), 0, Scalar(rat(2)));
  s.add(ev(rat(1, 3)) + 1, 2, Scalar::tau(1));
  s.add(ev(rat(-5, 3)), 1, Scalar(rat(-1, 2)));
  s.add(ei(0), 2, Scalar(rat(3, 7)));
  s.add(ev(rat(1, 2)), 1, Scalar::root(4, 1));
  return s;
}

TEST_CASE("partial exponentials") {
  LS s(0);
  s.add(ev(rat(1, 3)), 0, Scalar(1));
  REQUIRE(s.exp_x_dx(1).coeff(ev(rat(1, 3)), 0) == Scalar::root(3, 1));

  // e^{-2 pi i d/d log x} (log x) = log x - 2 pi i
  LS l(1);
  l.add(ei(0), 1, Scalar(1));
  LS tl = l.exp_dlog(-1);
  REQUIRE(tl.coeff(ei(0), 1) == Scalar(1));
  REQUIRE(tl.coeff(ei(0), 0) == -Scalar::two_pi_i(1));

  // e^{-2 pi i x d/dx} e^{-2 pi i d/d log x} inverts the monodromy
  LS r = sample_series();
  REQUIRE(r.monodromy().exp_dlog(-1).exp_x_dx(-1) == r);
  REQUIRE(r.monodromy().exp_x_dx(-1).exp_dlog(-1) == r);
}

TEST_CASE("monodromy commutes with x d/dx") {
  LS r = sample_series();
  auto xd = [](const LS& s) { return s.full_derivative().shifted(Exponent::integer(1)); };
  REQUIRE(xd(r.monodromy()) == xd(r).monodromy());
}

TEST_CASE("translation eigenvector facts") {
  // p(log x) = 2 + 3 log x - log^2 x
  LS p(2);
  p.add(ei(0), 0, Scalar(2));
  p.add(ei(0), 1, Scalar(3));
  p.add(ei(0), 2, Scalar(-1));
  auto T = [](const LS& s) { return s.exp_dlog(-1); };

  // (T - 1)^3 annihilates polynomials of degree <= 2
  LS t1 = T(p) - p;
  REQUIRE(!t1.is_zero());
  LS t3 = T(T(t1) - t1) - (T(t1) - t1);
  REQUIRE(t3.is_zero());

  // (T - c)^N p stays nonzero for c != 1
  Scalar c(-1);
  auto step = [&](const LS& s) { return T(s) - s.scaled(c); };
  REQUIRE(!step(step(step(p))).is_zero());

  // only constants are T-eigenvectors, with eigenvalue 1
  REQUIRE(T(p) != p);
  LS konst(2);
  konst.add(ei(0), 0, Scalar(rat(5)));
  REQUIRE(T(konst) == konst);
}

TEST_CASE("set log zero") {
  LS s(1);
  s.add(ev(rat(1, 4)), 0, Scalar(1));
  s.add(ev(rat(1, 4)), 1, Scalar(1));
  LS z = s.set_log_zero();
  REQUIRE(z.coeff(ev(rat(1, 4)), 0) == Scalar(1));
  REQUIRE(z.coeff(ev(rat(1, 4)), 1) == Scalar(0));
  LS lf(0);
  lf.add(ei(2), 0, Scalar(7));
  REQUIRE(lf.set_log_zero() == lf);
}

TEST_CASE("log series residue") {
  LS s(1);
  s.add(ei(-1), 0, Scalar(rat(4)));
  s.add(ev(rat(1, 2)), 0, Scalar(1));
  REQUIRE(s.residue() == Scalar(rat(4)));

  LS h(0);
  h.add(ev(rat(1, 2)), 0, Scalar(1));
  REQUIRE(h.residue() == Scalar(0));

  LS amb(1);
  amb.add(ei(-1), 0, Scalar(1));
  amb.add(ei(-1), 1, Scalar(1));
  REQUIRE_THROWS_AS(amb.residue(), TwistError);
  REQUIRE(amb.residue(true) == Scalar(1));

  // frontier blocks the query instead of claiming zero
  LS trunc(0, RatExt(rat(-2)));
  REQUIRE_THROWS_AS(trunc.residue(), TwistError);
}

TEST_CASE("iota expansion of binomials") {
  // (x1 - x2)^{-1} = sum_j x1^{-1-j} x2^j
  MS g = iota_expand(1, 2, rat(-1), rat(1), rat(-1), 6);
  MKey k;
  k.e[1] = ei(-3);
  k.e[2] = ei(2);
  REQUIRE(g.coeff(k) == Scalar(1));
  k.e[1] = ei(-1);
  k.e[2] = ei(0);
  REQUIRE(g.coeff(k) == Scalar(1));
  // x1^0 x2^0 is off the support but inside trust: exactly zero
  k.e[1] = ei(0);
  k.e[2] = ei(0);
  REQUIRE(g.coeff(k) == Scalar(0));
  // beyond the truncation the series is not trusted
  k.e[1] = ei(-8);
  k.e[2] = ei(7);
  REQUIRE(!g.trusted(k));
  REQUIRE_THROWS_AS(g.coeff(k), TwistError);

  // (x1 - x2)^2 is finite and exact everywhere
  MS sq = iota_expand(1, 2, rat(2), rat(1), rat(-1), 99);
  MKey q;
  q.e[1] = ei(1);
  q.e[2] = ei(1);
  REQUIRE(sq.coeff(q) == Scalar(-2));
  q.e[1] = ei(0);
  q.e[2] = ei(2);
  REQUIRE(sq.coeff(q) == Scalar(1));
  q.e[1] = ei(5);
  q.e[2] = ei(5);
  REQUIRE(sq.coeff(q) == Scalar(0)); // trusted: finite expansion
}

TEST_CASE("iota direction difference is a one-sided delta") {
  // expansions of (x1 - x2)^m in the two directions agree for m >= 0
  MS a2 = iota_expand(1, 2, rat(2), rat(1), rat(-1), 50);
  MS b2 = iota_expand(2, 1, rat(2), rat(-1), rat(1), 50);
  REQUIRE(!first_mismatch(a2, b2, Window{}).has_value());

  // for m = -1 the difference is the formal delta: coefficient 1 at every
  // (n, -1-n) pair inside the trusted window
  MS a = iota_expand(1, 2, rat(-1), rat(1), rat(-1), 10);
  MS b = iota_expand(2, 1, rat(-1), rat(-1), rat(1), 10);
  MS d = a - b;
  for (long n : {-3L, 0L, 2L}) {
    MKey k;
    k.e[1] = ei(n);
    k.e[2] = ei(-1 - n);
    REQUIRE(d.coeff(k) == Scalar(1));
  }
  MKey off;
  off.e[1] = ei(1);
  off.e[2] = ei(1);
  REQUIRE(d.coeff(off) == Scalar(0));
}

TEST_CASE("windowed product of truncated and exact series") {
  // (x1 - x2)^2 * iota(x1 - x2)^{-1} = iota(x1 - x2), verified on the
  // window that the trust calculus grants
  MS inv = iota_expand(1, 2, rat(-1), rat(1), rat(-1), 8);
  MS sq = iota_expand(1, 2, rat(2), rat(1), rat(-1), 99);
  MS prod = sq * inv;
  MS lin = iota_expand(1, 2, rat(1), rat(1), rat(-1), 99);
  Window w;
  w.hi[2] = RatExt(rat(8));
  REQUIRE(prod.trust_hi(2) == RatExt(rat(8)));
  REQUIRE(!first_mismatch(prod, lin, w).has_value());

  // a window beyond the trusted range is refused
  Window big;
  big.hi[2] = RatExt(rat(9));
  REQUIRE_THROWS_AS(first_mismatch(prod, lin, big), TwistError);
}

TEST_CASE("multi series residue") {
  MS s = MS::exact();
  MKey k;
  k.e[0] = ei(-1);
  s.add(k, Scalar(1));
  MS r = s.residue(0);
  MKey zero;
  REQUIRE(r.coeff(zero) == Scalar(1));

  MS h = MS::exact();
  MKey kh;
  kh.e[0] = ev(rat(1, 2));
  h.add(kh, Scalar(1));
  REQUIRE(h.residue(0).is_zero());

  MS amb = MS::windowed({RatExt(rat(-1)), RatExt(rat(0)), RatExt(rat(0))},
                        {RatExt(rat(-1)), RatExt(rat(0)), RatExt(rat(0))},
                        {RatExt::pos_inf(), RatExt::pos_inf(), RatExt::pos_inf()},
                        RatExt(rat(-1)), RatExt(rat(-1)), RatExt::pos_inf(), {1, 0, 0});
  MKey ka;
  ka.e[0] = ei(-1);
  ka.k[0] = 1;
  amb.add(ka, Scalar(1));
  REQUIRE_THROWS_AS(amb.residue(0), TwistError);
  REQUIRE(amb.residue(0, true).is_zero());
}

TEST_CASE("delta substitution") {
  // x1^{3/2} -> x2^{3/2}
  MS s = MS::exact();
  MKey k;
  k.e[1] = ev(rat(3, 2));
  s.add(k, Scalar(1));
  MS t = s.substitute(1, 2);
  MKey kt;
  kt.e[2] = ev(rat(3, 2));
  REQUIRE(t.coeff(kt) == Scalar(1));

  // constants pass through
  MS one = MS::exact();
  one.add(MKey{}, Scalar(1));
  REQUIRE(one.substitute(1, 2).coeff(MKey{}) == Scalar(1));

  // log powers migrate with the variable
  MKey kl;
  kl.e[1] = ev(rat(1, 3));
  kl.k[1] = 1;
  MS l = MS::windowed({RatExt(rat(0)), RatExt(rat(1, 3)), RatExt(rat(0))},
                      {RatExt(rat(0)), RatExt(rat(1, 3)), RatExt(rat(0))},
                      {RatExt::pos_inf(), RatExt::pos_inf(), RatExt::pos_inf()},
                      RatExt(rat(1, 3)), RatExt(rat(1, 3)), RatExt::pos_inf(), {0, 1, 0});
  l.add(kl, Scalar(1));
  MS lt = l.substitute(1, 2);
  MKey klt;
  klt.e[2] = ev(rat(1, 3));
  klt.k[2] = 1;
  REQUIRE(lt.coeff(klt) == Scalar(1));
  REQUIRE(lt.log_cap(2) == 1);

  // (x1 - x2)^2 collapses to zero under x1 -> x2
  MS sq = iota_expand(1, 2, rat(2), rat(1), rat(-1), 99);
  REQUIRE(sq.substitute(1, 2).is_zero());

  // substituting into the one-sided geometric series is ill-formed
  MS inv = iota_expand(1, 2, rat(-1), rat(1), rat(-1), 8);
  try {
    inv.substitute(1, 2);
    FAIL("expected IllFormedProduct");
  } catch (const TwistError& e) {
    REQUIRE(e.code == "IllFormedProduct");
  }
}

TEST_CASE("operator-valued binomial expansion matches exp-log") {
  // N: single nilpotent block, N^3 = 0, entries carry tau
  Mat<Scalar> nb = Mat<Scalar>::zero(3, 3);
  nb.at(0, 1) = Scalar::tau(1);
  nb.at(1, 2) = Scalar::tau(1);
  GradedOperator N;
  N.set_block(0, nb);

  const long J = 4;
  auto series = iota_expand_op(2, 0, N, J);

  // oracle: (1+y)^N = exp(N log(1+y)), log(1+y) = y - y^2/2 + y^3/3 - ...
  std::vector<Rat> lg(J + 1, Rat(0));
  for (long j = 1; j <= J; ++j) lg[j] = rat(j % 2 == 1 ? 1 : -1, j);
  // powers of the log series, truncated at y^J
  std::vector<std::vector<Rat>> lp;
  std::vector<Rat> cur(J + 1, Rat(0));
  cur[0] = 1;
  lp.push_back(cur);
  for (int i = 1; i <= 2; ++i) {
    std::vector<Rat> nxt(J + 1, Rat(0));
    for (long a = 0; a <= J; ++a)
      for (long b = 0; a + b <= J; ++b) nxt[a + b] += lp.back()[a] * lg[b];
    lp.push_back(nxt);
  }
  for (long j = 0; j <= J; ++j) {
    GradedOperator oracle;
    Mat<Scalar> acc = Mat<Scalar>::zero(3, 3);
    GradedOperator npow = N.identity_like();
    Rat fact(1);
    for (int i = 0; i <= 2; ++i) {
      if (i > 0) {
        npow = npow * N;
        fact *= i;
      }
      acc = acc + npow.block(0).scaled(Scalar(lp[i][j] / fact));
    }
    oracle.set_block(0, acc);
    MKey k;
    k.e[2] = ei(-j);
    k.e[0] = ei(j);
    REQUIRE(series.coeff(k) == oracle);
  }

  // beyond the truncation: untrusted
  MKey far;
  far.e[2] = ei(-(J + 1));
  far.e[0] = ei(J + 1);
  REQUIRE(!series.trusted(far));
}
