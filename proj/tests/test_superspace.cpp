#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zzsg/superspace.hpp"

using namespace zzsg;

TEST_CASE("coordinate actions") {
  auto tm = GradedExpr::coord(Coord::ThetaM);
  CHECK(apply(deriv_Dm(), tm) == GradedExpr::constant(1));
  CHECK(deriv_Qm().c_pm == GradedExpr::coord(Coord::ThetaM) * Rational(1, 2));
}

TEST_CASE("D+ squared is -1/2 P+") {
  auto phi = generic_superfield("Phi", 1);
  auto dd = apply(deriv_Dp(), apply(deriv_Dp(), phi.expr));
  CHECK(dd == apply(deriv_Pp(), phi.expr) * Rational(-1, 2));
}

TEST_CASE("brackets from the examples") {
  auto phi = generic_superfield("Phi", 1);
  CHECK(bracket(deriv_Qm(), deriv_Qm(), phi) == apply(deriv_Pm(), phi.expr));
  CHECK(bracket(deriv_Qm(), deriv_Qp(), phi) == apply(deriv_Z(), phi.expr));
  CHECK(bracket(deriv_Dm(), deriv_Dp(), phi) == -apply(deriv_Z(), phi.expr));
  CHECK(bracket(deriv_Pm(), deriv_Qp(), phi).is_zero());
}

TEST_CASE("[Q-, D+] against the hand expansion") {
  // d/dtheta- hits -1/2 theta- d/dz in D+ and d/dtheta+ hits -1/2 theta+ d/dz in Q-;
  // with the commutator sign the two -1/2 d/dz pieces cancel.
  auto phi = generic_superfield("Phi", 1);
  CHECK(bracket(deriv_Qm(), deriv_Dp(), phi).is_zero());
  CHECK(bracket(deriv_Qp(), deriv_Dm(), phi).is_zero());
}

TEST_CASE("full superalgebra report") {
  auto r = verify_superalgebra();
  INFO(render_text(r));
  CHECK(r.passed());
  CHECK(r.children.size() == 15 + 3 + 4 + 2);
}

TEST_CASE("weights") {
  auto phi = generic_superfield("Phi", 0);
  CHECK(weight_of(apply(deriv_Dp(), phi.expr)) == BoostWeight{-1});
  auto t = GradedExpr::coord(Coord::ThetaM) * GradedExpr::jet(make_jet("psi+"));
  CHECK(weight_of(t) == BoostWeight{0});
  CHECK(weight_of(GradedExpr::cliff(Cliff::LamP) * GradedExpr::cliff(Cliff::LamM)) == BoostWeight{0});
  CHECK_THROWS_AS(weight_of(phi.expr + GradedExpr::jet(make_jet("psi+"))), Error);
}

TEST_CASE("generic superfields") {
  auto p0 = generic_superfield("Phi", 0);
  CHECK(p0.expr.size() == 4);
  CHECK(generic_superfield("Phi", 1).expr.size() == 8);
  auto a = jets_of(generic_superfield("A", 1).expr), b = jets_of(generic_superfield("B", 1).expr);
  for (const auto& j : a)
    for (const auto& k : b) CHECK(!(j == k));
}

TEST_CASE("abstract atoms agree with their realization") {
  auto phi = superfield_atom("Phi");
  const std::vector<const Derivation*> ds{&deriv_Dm(), &deriv_Dp(), &deriv_Pm(), &deriv_Pp()};
  for (const auto* a : ds)
    for (const auto* b : ds)
      for (const auto* c : ds) {
        auto e = apply(*a, apply(*b, apply(*c, phi)));
        auto r = apply(*a, apply(*b, apply(*c, generic_superfield("Phi", 0).expr)));
        CHECK(realize(e) == r);
      }
  CHECK_THROWS_AS(apply(deriv_Qm(), phi), Error);
  CHECK(apply(deriv_Z(), phi).is_zero());
}
