#include <catch2/catch_amalgamated.hpp>

#include <twistcalc/build.hpp>

using namespace twistcalc;
using namespace twistcalc::exactalg;
using namespace twistcalc::voa;
using namespace twistcalc::examples;

// independent dimension oracle: coefficients of prod_{n>=1} (1-q^n)^(-colors)
static std::vector<long> colored_partitions(int colors, int wmax) {
  std::vector<long> dp(static_cast<size_t>(wmax) + 1, 0);
  dp[0] = 1;
  for (int n = 1; n <= wmax; ++n)
    for (int c = 0; c < colors; ++c)
      for (int w = n; w <= wmax; ++w) dp[static_cast<size_t>(w)] += dp[static_cast<size_t>(w - n)];
  return dp;
}

TEST_CASE("fock basis enumeration matches partition counts") {
  auto ex = build_free_boson(6);
  auto oracle = colored_partitions(1, 6);
  for (int w = 0; w <= 6; ++w) REQUIRE(ex.V.dim(w) == oracle[static_cast<size_t>(w)]);
  REQUIRE(ex.V.dims == std::vector<int>{1, 1, 2, 3, 5, 7, 11});

  auto un = build_outer_nilpotent(3);
  auto oracle3 = colored_partitions(3, 3);
  REQUIRE(un.V.dims == std::vector<int>{1, 3, 9, 22});
  for (int w = 0; w <= 3; ++w) REQUIRE(un.V.dim(w) == oracle3[static_cast<size_t>(w)]);

  // deterministic state order at weight 3, largest part first
  REQUIRE(ex.V.names[3] ==
          std::vector<std::string>{"a(-3)1", "a(-2)a(-1)1", "a(-1)a(-1)a(-1)1"});
  REQUIRE(un.V.names[1] == std::vector<std::string>{"p(-1)1", "q(-1)1", "r(-1)1"});
}

TEST_CASE("free boson low products against hand values") {
  auto ex = build_free_boson(5);
  const VOAData& V = ex.V;
  BRef vac{0, 0}, a{1, 0};
  BRef a2{2, 0};   // a(-2)1
  BRef a11{2, 1};  // a(-1)a(-1)1

  REQUIRE(V.product(a, 1, a) == Vec::unit(vac));
  REQUIRE(V.product(a, 0, a).is_zero());
  REQUIRE(V.product(a, 2, a).is_zero());  // weight below zero
  REQUIRE(V.product(a, -1, a) == Vec::unit(a11));
  REQUIRE(V.product(a, -2, a) == Vec::unit({3, 1}));  // a(-2)a(-1)1
  REQUIRE(V.product(a, -1, vac) == Vec::unit(a));
  REQUIRE(V.product(vac, -1, a) == Vec::unit(a));
  REQUIRE(V.product(vac, 0, a).is_zero());

  // omega = (1/2) a(-1)^2 1 and its Virasoro modes
  REQUIRE(V.omega == Vec::unit(a11) * Scalar(rat(1, 2)));
  REQUIRE(V.L(-2, V.vacuum_vec()) == V.omega);
  REQUIRE(V.L(-1, V.vacuum_vec()).is_zero());
  REQUIRE(V.L(-1, Vec::unit(a)) == Vec::unit(a2));
  REQUIRE(V.L(1, Vec::unit(a)).is_zero());
  REQUIRE(V.L(0, Vec::unit(a)) == Vec::unit(a));
  REQUIRE(V.L(0, V.omega) == V.omega * Scalar(2));
  REQUIRE(V.L(2, V.omega) == V.vacuum_vec() * Scalar(rat(1, 2)));  // c/2 = 1/2
  REQUIRE(V.L(1, V.omega).is_zero());

  // L(0) is the weight grading across the table
  for (int w = 0; w <= 5; ++w)
    for (int i = 0; i < V.dim(w); ++i)
      REQUIRE(V.L(0, Vec::unit({w, i})) == Vec::unit({w, i}) * Scalar(w));

  // querying beyond the cutoff is an error, not a zero
  try {
    V.product(a, -10, a);
    FAIL("expected TableIncomplete");
  } catch (const TwistError& e) {
    REQUIRE(e.code == "TableIncomplete");
  }
}

TEST_CASE("free boson passes the axiom checks") {
  auto ex = build_free_boson(5);
  CheckReport rep = check_voa_axioms(ex.V, 2);
  INFO(rep.locus);
  REQUIRE(rep.pass);
  REQUIRE(rep.checks > 1000);
}

TEST_CASE("axiom check localizes a corrupted structure constant") {
  auto ex = build_free_boson(4);
  ex.V.materialize_all();
  ex.V.provider = nullptr;
  BRef a{1, 0};
  ex.V.set_product(a, 1, a, Vec{});  // destroy a(1)a = 1
  CheckReport rep = check_voa_axioms(ex.V, 2);
  REQUIRE(!rep.pass);
  REQUIRE(!rep.locus.empty());
  INFO(rep.locus);
  REQUIRE(rep.locus.find("a(-1)1") != std::string::npos);
}

TEST_CASE("involution decomposition on the free boson") {
  auto ex = build_free_boson(5);
  AutomorphismData A = decompose_automorphism(ex.V, ex.g, 2);
  REQUIRE(A.PV == std::set<Rat>{rat(0), rat(1, 2)});
  REQUIRE(A.K == 0);
  REQUIRE(A.N.is_zero());
  REQUIRE(A.sem == A.g);

  Vec a = Vec::unit({1, 0});
  Vec s2 = Vec::unit({2, 0});   // a(-2)1, one oscillator
  Vec s11 = Vec::unit({2, 1});  // a(-1)^2 1, two oscillators
  REQUIRE(A.project(rat(1, 2), a) == a);
  REQUIRE(A.project(rat(0), a).is_zero());
  REQUIRE(A.project(rat(1, 2), s2) == s2);
  REQUIRE(A.project(rat(0), s11) == s11);
  REQUIRE(A.alpha_of(a) == rat(1, 2));
  REQUIRE(A.alpha_of(s11) == rat(0));
  REQUIRE_THROWS_AS(A.alpha_of(a + s11), TwistError);

  CheckReport rep = check_s_rule(ex.V, A);
  INFO(rep.locus);
  REQUIRE(rep.pass);
  REQUIRE(rep.checks > 100);
}

TEST_CASE("non-automorphisms are rejected with a locus") {
  auto ex = build_free_boson(4);
  // scaling the weight-1 block breaks u(n)v compatibility
  GradedOperator bad = ex.g.identity_like();
  bad.set_block(1, Mat<Scalar>::identity(1).scaled(Scalar(2)));
  try {
    decompose_automorphism(ex.V, bad, 1);
    FAIL("expected NotAutomorphism");
  } catch (const TwistError& e) {
    REQUIRE(e.code == "NotAutomorphism");
  }

  // a genuine automorphism with the wrong declared order
  try {
    decompose_automorphism(ex.V, ex.g, 3);
    FAIL("expected NonRootOfUnitySpectrum");
  } catch (const TwistError& e) {
    REQUIRE(e.code == "NonRootOfUnitySpectrum");
  }
}

TEST_CASE("outer nilpotent fragment decomposition and round trip") {
  auto un = build_outer_nilpotent(3);
  REQUIRE(apply(un.R, un.V.omega).is_zero());

  AutomorphismData A = decompose_automorphism(un.V, un.g, 1);
  REQUIRE(A.PV == std::set<Rat>{rat(0)});
  // on the generators the chain q -> r -> -p -> 0 dies after three steps,
  // but the derivation extension to q(-1)^3 1 survives six applications
  REQUIRE(A.K == 6);
  Vec q3 = Vec::unit(un.basis->ref_of(State{{1, 1}, {1, 1}, {1, 1}}));
  Vec it = q3;
  for (int k = 0; k < 6; ++k) it = apply(A.N, it);
  REQUIRE(!it.is_zero());
  REQUIRE(apply(A.N, it).is_zero());
  REQUIRE(A.sem == un.g.identity_like());
  REQUIRE(A.unip == un.g);
  REQUIRE(A.N == un.R.scaled(Scalar::tau(1)));

  // N on the generators: q -> r, r -> -p, p -> 0 (times tau)
  Vec p = Vec::unit({1, 0}), q = Vec::unit({1, 1}), r = Vec::unit({1, 2});
  REQUIRE(apply(A.N, q) == r * Scalar::tau(1));
  REQUIRE(apply(A.N, r) == p * (Scalar::tau(1) * Scalar(-1)));
  REQUIRE(apply(A.N, p).is_zero());

  CheckReport rep = check_voa_axioms(un.V, 1);
  INFO(rep.locus);
  REQUIRE(rep.pass);

  // corrupting one entry of g breaks the product compatibility scan
  GradedOperator bad = un.g;
  Mat<Scalar> blk = bad.block(1);
  blk.at(0, 0) += Scalar(1);
  bad.set_block(1, blk);
  try {
    decompose_automorphism(un.V, bad, 1);
    FAIL("expected NotAutomorphism");
  } catch (const TwistError& e) {
    REQUIRE(e.code == "NotAutomorphism");
  }
}

TEST_CASE("c2 quotients: boson grows, trivial certifies") {
  auto ex = build_free_boson(5);
  AutomorphismData A = decompose_automorphism(ex.V, ex.g, 2);
  C2Report c2 = compute_c2(ex.V, A, 5);
  REQUIRE(c2.quot_dim == std::vector<int>{1, 1, 1, 1, 1, 1});
  REQUIRE(c2.M == 6);
  REQUIRE(!c2.m_certified);
  REQUIRE(c2.B.size() == 5);
  // representatives are the pure a(-1)^w states, alternating eigenvalue
  for (const auto& rep : c2.B) {
    int w = rep.weight;
    int last = ex.V.dim(w) - 1;  // [1,1,...,1] sorts last
    REQUIRE(rep.v == Vec::unit({w, last}));
    REQUIRE(rep.alpha == (w % 2 ? rat(1, 2) : rat(0)));
  }
  // C2 dimensions agree with a hand count at low weight
  REQUIRE(c2.c2_dim == std::vector<int>{0, 0, 1, 2, 4, 6});

  auto tr = build_trivial();
  AutomorphismData Atr = identity_automorphism(tr.V);
  C2Report c2t = compute_c2(tr.V, Atr, 2);
  REQUIRE(c2t.quot_dim == std::vector<int>{1, 0, 0});
  REQUIRE(c2t.M == 1);
  REQUIRE(c2t.m_certified);
  REQUIRE(c2t.B.empty());

  try {
    compute_c2(ex.V, A, 7);
    FAIL("expected CutoffTooSmall");
  } catch (const TwistError& e) {
    REQUIRE(e.code == "CutoffTooSmall");
  }
}

TEST_CASE("c2 solver expresses vectors over reps and generators") {
  auto ex = build_free_boson(5);
  AutomorphismData A = decompose_automorphism(ex.V, ex.g, 2);
  C2Report c2 = compute_c2(ex.V, A, 5);
  // weight 3: solver generators are [rep a(-1)^3] then C2 vectors
  auto& solver = c2.solvers[3];
  REQUIRE(solver.rank() == 3);
  // a(-3)1 = unit(3,0) must be expressible with zero rep coefficient
  auto coords = vec_to_cyclo_coords(Vec::unit({3, 0}), 3, ex.V.dim(3));
  auto expr = solver.express(coords);
  REQUIRE(expr.has_value());
  REQUIRE((*expr)[0].is_zero());  // no contribution from the B representative
}

TEST_CASE("trivial algebra axioms") {
  auto tr = build_trivial();
  CheckReport rep = check_voa_axioms(tr.V, 2);
  INFO(rep.locus);
  REQUIRE(rep.pass);
  AutomorphismData A = decompose_automorphism(tr.V, tr.g, 1);
  REQUIRE(A.PV == std::set<Rat>{rat(0)});
  REQUIRE(A.K == 0);
}
