#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zzsg/backlund.hpp"

using namespace zzsg;

namespace {

// d_b Phi~ + d_b Phi - 2 a^-1 s_b sin((Phi~ - Phi)/4), order by order on-shell.
GradedExpr b_equation(const BTSystem& sys, const std::vector<GradedExpr>& c, int k) {
  const Truncation t = sys.trunc;
  OnShellRewriter R({sys.seed});
  GradedExpr S = series_sum(c, t), seed = sys.seed_atom();
  GradedExpr e = apply(sys.d_b(), S) + apply(sys.d_b(), seed) -
                 GradedExpr::apow(-1, t) * GradedExpr::cliff(sys.s_b(), t) *
                     trig_of(TrigKind::Sin, S - seed, Rational(1, 4)) * 2;
  return R.reduce(series_coefficient(e, k));
}

}  // namespace

TEST_CASE("sum identity holds under the BT rules") {
  for (auto sys : {minus_system(), plus_system()}) {
    JetResolver R = bt_resolver(sys);
    auto tgt = sys.target_atom();
    // Z Phi~ = D+ D- Phi~ - D- D+ Phi~ with both first derivatives taken from the rules.
    auto dm = apply(deriv_Dm(), tgt, R), dp = apply(deriv_Dp(), tgt, R);
    auto z = apply(deriv_Dp(), dm, R) - apply(deriv_Dm(), dp, R);
    CHECK(z == bt_compatibility(sys));
    Rational eps = sys.orientation == Orientation::Minus ? 1 : -1;
    auto e = sg_residual(tgt, R) + sg_residual(sys.seed_atom()) - z * eps;
    CHECK(bt_reduce(e, sys).is_zero());
  }
}

TEST_CASE("difference identity does not close") {
  auto r = verify_auto_bt(minus_system());
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.residual.is_zero());
}

TEST_CASE("auto-BT sabotage is detected") {
  auto r = verify_auto_bt(minus_system());
  bool seen = false;
  for (const auto& c : r.children)
    if (c.check.starts_with("sabotage")) {
      CHECK(c.status == Status::Pass);
      seen = true;
    }
  CHECK(seen);
}

TEST_CASE("series coefficients") {
  auto c = expand_series(minus_system(), 4);
  CHECK(c[0].str() == "Phi");
  CHECK(c[1].str() == "-4*lambda-*v+*D+ Phi");
  CHECK(c[2].str() == "-4*v+*Phi_{+}");
  CHECK(c[3].str() == "8*lambda-*v+^2*D+ Phi_{+}");
  CHECK(c[4].str() == "8*v+^2*Phi_{++}");
}

TEST_CASE("series solves the d_b equation") {
  for (auto sys : {minus_system(), plus_system()}) {
    auto c = expand_series(sys, 6);
    for (int k = -1; k <= 5; ++k) {
      CAPTURE(k);
      CHECK(b_equation(sys, c, k).is_zero());
    }
  }
}

TEST_CASE("series nilpotency pattern") {
  auto c = expand_series(minus_system(), 6);
  for (int n = 1; n <= 6; ++n) CHECK((c[n] * c[n]).is_zero() == (n % 2 == 1));
}

TEST_CASE("plus system is the involution image of the minus system") {
  auto m = expand_series(minus_system(), 5), p = expand_series(plus_system(), 5);
  for (int n = 0; n <= 5; ++n) {
    CHECK(involution(m[n]) == p[n]);
    CHECK(involution(involution(m[n])) == m[n]);
  }
  CHECK(involution(generic_superfield("Phi", 0).expr) == generic_superfield("Phi", 0).expr);
}

TEST_CASE("closed form at low order") {
  auto sys = minus_system();
  CHECK(closed_form_term(sys, 2) == expand_series(sys, 2)[2]);
  CHECK(closed_form_term(sys, 3) == expand_series(sys, 3)[3]);
}

TEST_CASE("redundancy of the a-rule fails at a^2") {
  auto r = verify_redundancy(minus_system(), 3);
  REQUIRE(r.children.size() == 4);
  CHECK(r.children[1].status == Status::Pass);
  CHECK(r.children[2].residual.str() == "4*alpha*v+*D+ Phi*cos(1/2*Phi)");
}

TEST_CASE("current conservation") {
  for (auto sys : {minus_system(), plus_system()}) {
    auto r = verify_current_conservation(sys);
    INFO(render_text(r));
    CHECK(r.passed());
  }
}

TEST_CASE("commuting spinor parameters break conservation") {
  CommutingSpinorParams guard;
  auto j = currents(minus_system());
  JetResolver R = bt_resolver(minus_system());
  auto d = apply(deriv_Dm(), j.j_minus, R) + apply(deriv_Dp(), j.j_plus, R);
  CHECK(d.str() == "-1/2*alpha*cos(1/2*Phi) + 1/2*alpha*cos(1/2*Phi~)");
}

TEST_CASE("conservation audit is deterministic and oracle-consistent") {
  auto a = conservation_audit(minus_system(), 2), b = conservation_audit(minus_system(), 2);
  CHECK(render_text(a) == render_text(b));
  for (const auto& c : a.children)
    if (c.check == "component-level oracle agreement" || c.check == "full identity, current form")
      CHECK(c.status == Status::Pass);
}

TEST_CASE("body relations") {
  auto m = export_body_system(minus_system());
  REQUIRE(m.relations.size() == 2);
  CHECK(m.relations[0].second.str() == "X_{-} + v+*a^2*sin(1/2*X + 1/2*X~)");
  CHECK(m.relations[1].second.str() == "v-*a^-2*sin(1/2*X - 1/2*X~) - X_{+}");
}
