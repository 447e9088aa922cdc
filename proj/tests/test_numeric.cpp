#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zzsg/numeric.hpp"

using namespace zzsg;

namespace {

constexpr double kPi = std::numbers::pi;

// Classical relations with A = a^2, B = a^-2 (AB = 1): vacuum -> kink.
BodyRelations classical_relations() {
  auto sinq = [](Rational s) {
    return GradedExpr::scalar(ScalarExpr::trig(TrigKind::Sin, {{"X", s}, {"X~", Rational(1, 2)}}));
  };
  GradedExpr m = GradedExpr::jet(make_jet("X", 1, 0)) + GradedExpr::vpow(1) * GradedExpr::apow(2) * sinq(Rational(1, 2));
  GradedExpr p = GradedExpr::vpow(-1) * GradedExpr::apow(-2) * sinq(Rational(-1, 2)) - GradedExpr::jet(make_jet("X", 0, 1));
  return {{{make_jet("X~", 1, 0), m}, {make_jet("X~", 0, 1), p}}};
}

std::vector<FieldState> vacuum_frames(double h, double dt) {
  std::vector<FieldState> f;
  for (int n = -2; n <= 2; ++n) {
    auto s = FieldState::zeros(20, h, Boundary::Kink);
    s.t = n * dt;
    f.push_back(s);
  }
  return f;
}

}  // namespace

TEST_CASE("graded number table matches symbolic normalization") {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      GradedExpr sym = GradedExpr::cliff(GradedNumber::kBasis[i]) * GradedExpr::cliff(GradedNumber::kBasis[j]);
      REQUIRE(sym.size() == 1);
      const auto& [k, c] = *sym.terms().begin();
      auto [s, idx] = GradedNumber::table(i, j);
      CHECK(GradedNumber::kBasis[idx] == k.g.cliff);
      CHECK(Rational(s) == c);
    }
}

TEST_CASE("alpha part of an odd square cancels exactly") {
  GradedNumber x(0, 0.3711, -1.9173, 0);
  auto sq = x * x;
  CHECK(sq[3] == 0.0);
  CHECK(sq[0] == doctest::Approx(0.3711 * 0.3711 - 1.9173 * 1.9173));
}

TEST_CASE("kink closed form") {
  CHECK(kink(0, 0, 0, 0) == doctest::Approx(kPi));
  CHECK(kink(-60, 0, 0, 0) == doctest::Approx(0).epsilon(1e-12));
  CHECK(kink(60, 0, 0, 0) == doctest::Approx(2 * kPi));
  CHECK_THROWS_AS(kink(0, 0, 1.0, 0), Error);
}

TEST_CASE("static kink residual") {
  auto s = kink_state({20, 1.0 / 512, 1.0 / 1024}, 0, 0, 0);
  std::vector<double> z(s.size(), 0);
  CHECK(classical_residual(s.X, z, s.h, 4) < 1e-8);
  // Second-order stencil sits on its h^2 floor.
  CHECK(classical_residual(s.X, z, s.h, 2) > 1e-7);
}

TEST_CASE("energies") {
  CHECK(energy(FieldState::zeros(20, 1.0 / 128, Boundary::Kink)) == 0);
  CHECK(std::abs(energy(kink_state({}, 0, 0, 0)) - 8) < 1e-6);
  double v = 0.6;
  CHECK(std::abs(energy(kink_state({}, 0, v, 1.5)) - 8 / std::sqrt(1 - v * v)) < 1e-5);
}

TEST_CASE("leapfrog") {
  auto vac = solve_leapfrog(FieldState::zeros(10, 1.0 / 64, Boundary::Periodic), 2, 1.0 / 128);
  for (double x : vac.X) CHECK(x == 0);
  CHECK_THROWS_AS(solve_leapfrog(kink_state({}, 0, 0, 0), 1, 1.0 / 64), Error);

  double err[2];
  int i = 0;
  for (double h : {1.0 / 64, 1.0 / 128}) {
    auto s = solve_leapfrog(kink_state({20, h, h / 2}, 0, 0.5, 0), 10, h / 2);
    double e = 0;
    for (size_t j = 0; j < s.size(); ++j) e = std::max(e, std::abs(s.X[j] - kink(s.x(j), 10, 0.5, 0)));
    err[i++] = e;
  }
  CHECK(err[1] < 1e-4);
  CHECK(err[0] / err[1] > 3.5);
  CHECK(err[0] / err[1] < 4.5);

  auto s0 = kink_state({}, 0, 0, 0);
  auto s1 = solve_leapfrog(s0, 10, 1.0 / 256);
  CHECK(std::abs(energy(s1) - energy(s0)) / energy(s0) < 1e-6);
}

TEST_CASE("leapfrog with fermions keeps the source on the alpha line") {
  auto s = kink_state({10, 1.0 / 64, 1.0 / 128}, 0, 0, 0);
  for (size_t j = 0; j < s.size(); ++j) {
    s.psi_p[j] = GradedNumber::basis(Cliff::LamP, 1e-3 * std::exp(-s.x(j) * s.x(j)));
    s.psi_m[j] = GradedNumber::basis(Cliff::LamM, 2e-3 * std::exp(-s.x(j) * s.x(j)));
  }
  auto out = solve_leapfrog(s, 1, 1.0 / 128);
  CHECK_FALSE(out.fermion_free());
  CHECK_THROWS_AS(solve_leapfrog(s, 1, 1.0 / 256), Error);
}

TEST_CASE("fermions on a zero background") {
  auto bg = FieldState::zeros(20, 1.0 / 512, Boundary::Periodic);
  auto zero = integrate_fermions(bg, 0.5);
  CHECK(zero.state.fermion_free());

  // Plane wave: psi+ = cos(kx - wt) lambda+, psi- = (w - k) sin(kx - wt) lambda-, w^2 = k^2 + 1.
  double k = kPi / 20, w = std::sqrt(k * k + 1);
  for (size_t j = 0; j < bg.size(); ++j) {
    bg.psi_p[j] = GradedNumber::basis(Cliff::LamP, std::cos(k * bg.x(j)));
    bg.psi_m[j] = GradedNumber::basis(Cliff::LamM, (w - k) * std::sin(k * bg.x(j)));
  }
  auto r = integrate_fermions(bg, 1);
  double e = 0;
  for (size_t j = 0; j < bg.size(); ++j) {
    double th = k * bg.x(j) - w * r.state.t;
    e = std::max({e, std::abs(r.state.psi_p[j].coeff(Cliff::LamP) - std::cos(th)),
                  std::abs(r.state.psi_m[j].coeff(Cliff::LamM) - (w - k) * std::sin(th))});
  }
  CHECK(e < 1e-6);
}

TEST_CASE("fermion residual on a kink background") {
  double res[2];
  int i = 0;
  for (double h : {1.0 / 64, 1.0 / 128}) {
    auto bg = kink_state({20, h, h / 2}, 0, 0, 0);
    for (size_t j = 0; j < bg.size(); ++j) {
      bg.psi_p[j] = GradedNumber::basis(Cliff::LamP, std::exp(-std::pow(bg.x(j) + 3, 2) / 4));
      bg.psi_m[j] = GradedNumber::basis(Cliff::LamM, std::exp(-std::pow(bg.x(j) - 3, 2) / 4));
    }
    auto r = integrate_fermions(bg, 2);
    res[i++] = std::max(r.residual_plus, r.residual_minus);
  }
  CHECK(res[1] < 2e-5);
  CHECK(res[0] / res[1] == doctest::Approx(4).epsilon(0.15));
}

TEST_CASE("fermion zero mode of the kink stays put") {
  // psi+ = sech(x) lambda+, psi- = sech(x) lambda- is static on the kink.
  auto bg = kink_state({20, 1.0 / 128, 1.0 / 256}, 0, 0, 0);
  for (size_t j = 0; j < bg.size(); ++j) {
    bg.psi_p[j] = GradedNumber::basis(Cliff::LamP, 1 / std::cosh(bg.x(j)));
    bg.psi_m[j] = GradedNumber::basis(Cliff::LamM, 1 / std::cosh(bg.x(j)));
  }
  auto r = integrate_fermions(bg, 2);
  CHECK(r.residual_plus < 2e-5);
  CHECK(r.residual_minus < 2e-5);
  double drift = 0;
  for (size_t j = 0; j < bg.size(); ++j)
    drift = std::max(drift, std::abs(r.state.psi_p[j].coeff(Cliff::LamP) - 1 / std::cosh(bg.x(j))));
  CHECK(drift < 1e-4);
}

TEST_CASE("BT integrator on classical relations") {
  for (double a : {1.0, 1.3}) {
    auto bt = make_body_bt(classical_relations(), a);
    CHECK(bt.compatibility.is_zero());
    auto r = integrate_bt_body(vacuum_frames(1.0 / 128, 1.0 / 256), bt);
    auto fit = fit_kink(r.Xt[2], r.Xt_dot[2], 20, 1.0 / 128, 0);
    double a2 = a * a;
    CHECK(fit.subluminal);
    CHECK(fit.v == doctest::Approx((a2 - 1 / a2) / (a2 + 1 / a2)).epsilon(1e-8));
    CHECK(fit.max_error < 1e-6);
    CHECK(bt_classical_residual(r, 1.0 / 128) < 1e-6);
  }
  CHECK_THROWS_AS(make_body_bt(classical_relations(), 0), Error);
}

TEST_CASE("exported relations reject a kink seed") {
  auto bt = body_bt(minus_system(), 1);
  CHECK(bt.compatibility.str() == "sin(X)");
  std::vector<FieldState> frames{kink_state({}, 0, 0, 0)};
  CHECK_THROWS_AS(integrate_bt_body(frames, bt), Error);
}

TEST_CASE("csv layout") {
  auto s = FieldState::zeros(1, 0.25, Boundary::Kink);
  std::string csv = to_csv(s, {}, R"({"L":1})");
  CHECK(csv.starts_with("# {\"L\":1}\nt,x,X,psi_plus_lambda_plus_coeff,psi_minus_lambda_minus_coeff,residual\n"));
}
