// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance            all criteria
//   acceptance N [M...]   selected criteria

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "zzsg/cli.hpp"

using namespace zzsg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void need(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back((ok ? "ok: " : "FAILED: ") + what);
  }
};

const Report* child(const Report& r, const std::string& name) {
  for (const auto& c : r.children)
    if (c.check == name) return &c;
  return nullptr;
}

GradedExpr P(const std::string& s) { return parse_expr(s); }

// 1. superalgebra brackets and Jacobi
Outcome c1() {
  Outcome o;
  auto t0 = Clock::now();
  Report r = verify_superalgebra();
  double dt = seconds_since(t0);
  size_t n = 0;
  for (const auto& c : r.children) {
    o.need(c.status == Status::Pass && c.residual.is_zero(), c.check);
    ++n;
  }
  o.need(n >= 20, std::to_string(n) + " bracket/Jacobi checks");
  o.need(dt < 5, "runtime " + fmt(dt) + " s < 5 s");
  return o;
}

// 2. Euler-Lagrange of the Lagrangian
Outcome c2() {
  Outcome o;
  GradedExpr el = euler_lagrange(sine_gordon_lagrangian());
  GradedExpr d = el - P("D- D+ Phi + D+ D- Phi + alpha*sin(1/2*Phi)");
  o.need(d.is_zero(), "EL = D-D+Phi + D+D-Phi + alpha sin(Phi/2), engine " + el.str());
  return o;
}

// 3. component equations
Outcome c3() {
  Outcome o;
  std::map<std::string, GradedExpr> got;
  for (const auto& e : component_equations(true)) got[e.leading.field] = e.residual;
  const std::map<std::string, std::string> want{
      {"X", "X_{-+} - 1/4*sin(X) - 1/2*alpha*psi-*psi+*sin(1/2*X)"},
      {"psi+", "psi+_{+} + 1/2*alpha*psi-*cos(1/2*X)"},
      {"psi-", "psi-_{-} + 1/2*alpha*psi+*cos(1/2*X)"},
  };
  o.need(got.size() == 3, "three equations");
  for (const auto& [f, s] : want) o.need(got.count(f) && (got[f] - P(s)).is_zero(), f + ": " + s);
  bool aux = false;
  for (const auto& e : component_equations(false))
    if (e.sector == "1") aux = (e.residual - P("F + 1/2*alpha*sin(1/2*X)")).is_zero();
  o.need(aux, "2F = -alpha sin(X/2)");
  Bindings zero{{make_jet("psi+"), GradedExpr{}}, {make_jet("psi-"), GradedExpr{}}};
  o.need(got.count("X") && (substitute(got["X"], zero) - P("X_{-+} - 1/4*sin(X)")).is_zero(),
         "psi = 0 leaves X_{-+} - 1/4 sin X");
  return o;
}

// 4. auto-Backlund theorem
Outcome c4() {
  Outcome o;
  for (BTSystem s : {minus_system(), plus_system()}) {
    const std::string tag = s.orientation == Orientation::Minus ? "minus" : "plus";
    Report r = verify_auto_bt(s);
    o.need(r.residual.is_zero(), tag + ": sg(Phi~) - sg(Phi) under the rules = " + r.residual.str());
    const Report* sab = child(r, "sabotage detected");
    o.need(sab && sab->status == Status::Pass, tag + ": sign-flipped system gives a nonzero residual");
  }
  return o;
}

// 5. series
Outcome c5() {
  Outcome o;
  auto t0 = Clock::now();
  BTSystem s = minus_system();
  auto c = expand_series(s, 7);
  o.need((c[0] - P("Phi")).is_zero(), "Phi~_0 = Phi");
  o.need((c[1] - P("-4*lambda+*lambda+*lambda-*D+ Phi")).is_zero(), "Phi~_1 = -4 lambda+^2 lambda- D+Phi");
  o.need((c[2] - P("8*lambda+*lambda+*D+ D+ Phi")).is_zero(), "Phi~_2 = 8 lambda+^2 D+D+Phi");
  // Independent closed form: (-1)^(n+1) 2^(n+1) lambda+^(2n) lambda-^n D+^n Phi.
  for (int n = 1; n <= 6; ++n) {
    GradedExpr t = P("Phi");
    for (int i = 0; i < n; ++i) t = apply(deriv_Dp(), t);
    for (int i = 0; i < n; ++i) t = P("lambda-") * t;
    for (int i = 0; i < 2 * n; ++i) t = P("lambda+") * t;
    t = t * Rational((n % 2 ? 1 : -1) * (1 << (n + 1)));
    o.need((c[n] - t).is_zero(), "closed form n=" + std::to_string(n));
  }
  for (int n = 0; n <= 5; ++n)
    o.need((apply(deriv_Dp(), c[n]) * 2 - P("lambda-") * c[n + 1]).is_zero(),
           "recursion 2D+Phi~_n = lambda- Phi~_{n+1}, n=" + std::to_string(n));
  double dt = seconds_since(t0);
  o.need(dt < 30, "runtime " + fmt(dt) + " s < 30 s at N = 6");
  return o;
}

// 6. currents
Outcome c6() {
  Outcome o;
  for (BTSystem s : {minus_system(), plus_system()}) {
    const std::string tag = s.orientation == Orientation::Minus ? "minus" : "plus";
    Currents j = currents(s);
    GradedExpr div = bt_reduce(apply(deriv_Dm(), j.j_minus, bt_resolver(s)) +
                                   apply(deriv_Dp(), j.j_plus, bt_resolver(s)),
                               s);
    o.need(div.is_zero(), tag + ": D-j- + D+j+ = " + div.str());
    Report r = verify_current_conservation(s);
    o.need(r.passed(), tag + ": engine conservation report");
    const Report* sab = child(r, "sabotage detected (commuting spinor parameters)");
    o.need(sab && sab->status == Status::Pass,
           tag + ": commuting lambda-lambda+ leaves a nonzero residual" + (sab ? " " + sab->residual.str() : ""));
  }
  return o;
}

// 7. conservation audit
Outcome c7() {
  Outcome o;
  for (BTSystem s : {minus_system(), plus_system()}) {
    const std::string tag = s.orientation == Orientation::Minus ? "minus" : "plus";
    Report a = conservation_audit(s, 4), b = conservation_audit(s, 4);
    const Report* full = child(a, "full identity, current form");
    o.need(full && full->status == Status::Pass, tag + ": full identity holds");
    o.need(render_text(a) == render_text(b), tag + ": audit is deterministic");
    const Report* orc = child(a, "component-level oracle agreement");
    o.need(orc && orc->status == Status::Pass, tag + ": oracle agreement " + (orc ? orc->details : ""));
    int orders = 0, laws = 0, nil = 0;
    for (const auto& c : a.children) {
      orders += c.check.starts_with("printed form, order a^");
      laws += c.check.starts_with("claimed law");
      nil += c.check.starts_with("nilpotency Phi~_");
    }
    o.need(orders == 7 && laws == 5 && nil >= 6,
           tag + ": orders a^-2..a^4, laws k<=4, nilpotency n<=6 emitted");
  }
  RunConfig cfg;
  std::string text = canonical_text(run_check("conservation-audit", cfg));
  std::ifstream f(std::string(ZZSG_GOLDEN_DIR) + "/conservation-audit.txt", std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  o.need(f && ss.str() == text, "report equals the golden file");
  return o;
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

// 8. numerics
Outcome c8() {
  Outcome o;
  auto t0 = Clock::now();
  {
    const double h = 1.0 / 512;
    std::vector<double> X;
    for (double x = -20; x <= 20 + h / 2; x += h) X.push_back(4 * std::atan(std::exp(x)));
    double r = classical_residual(X, std::vector<double>(X.size(), 0.0), h, 4);
    o.need(r < 1e-8, "static kink residual " + fmt(r) + " < 1e-8 at h = 2^-9");
  }
  {
    double err[2];
    int i = 0;
    for (double h : {1.0 / 64, 1.0 / 128}) {
      auto s = solve_leapfrog(kink_state({20, h, h / 2}, 0, 0.5, 0), 10, h / 2);
      double e = 0;
      for (size_t j = 0; j < s.size(); ++j) {
        double g = 1 / std::sqrt(1 - 0.25);
        e = std::max(e, std::abs(s.X[j] - 4 * std::atan(std::exp(g * (s.x(j) - 0.5 * s.t)))));
      }
      err[i++] = e;
    }
    double q = err[0] / err[1];
    o.need(q >= 3.5 && q <= 4.5, "leapfrog refinement factor " + fmt(q) + " in [3.5, 4.5]");
  }
  {
    double e0 = energy(kink_state({}, 0, 0, 0));
    o.need(std::abs(e0 - 8) < 1e-6, "E(kink) - 8 = " + fmt(e0 - 8));
    const double v = 0.6, g = 1 / std::sqrt(1 - v * v);
    double e1 = energy(kink_state({}, 0, v, 0));
    o.need(std::abs(e1 - 8 * g) < 1e-5, "E(boosted) - 8 gamma = " + fmt(e1 - 8 * g));
  }
  for (double a : {1.0, 1.3}) {
    BodyBT bt = body_bt(minus_system(), a);
    std::string tag = "exported BT, a = " + fmt(a) + ": ";
    try {
      BTResult r = integrate_bt_body(vacuum_frames(1.0 / 128, 1.0 / 256), bt);
      KinkFit fit = fit_kink(r.Xt[2], r.Xt_dot[2], 20, 1.0 / 128, r.times[2]);
      o.need(fit.subluminal && fit.max_error < 1e-6,
             tag + "vacuum seed gives a kink (fitted v " + fmt(fit.v) + ", error " + fmt(fit.max_error) + ")");
      double res = bt_classical_residual(r, 1.0 / 128);
      o.need(res < 1e-6, tag + "classical residual " + fmt(res));
    } catch (const Error& e) {
      o.need(false, tag + e.what());
    }
  }
  {
    auto bg = FieldState::zeros(20, 1.0 / 512, Boundary::Periodic);
    const double k = 3.14159265358979323846 / 20, w = std::sqrt(k * k + 1);
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
    o.need(e < 1e-6, "fermion plane wave on the zero background, error " + fmt(e));
  }
  double dt = seconds_since(t0);
  o.need(dt < 120, "numeric runtime " + fmt(dt) + " s < 120 s");
  return o;
}

// 9. GradedNumber table
Outcome c9() {
  Outcome o;
  int agree = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      GradedExpr sym = GradedExpr::cliff(GradedNumber::kBasis[i]) * GradedExpr::cliff(GradedNumber::kBasis[j]);
      auto [s, idx] = GradedNumber::table(i, j);
      GradedNumber prod = GradedNumber::basis(GradedNumber::kBasis[i]) * GradedNumber::basis(GradedNumber::kBasis[j]);
      bool ok = sym.size() == 1;
      if (ok) {
        const auto& [key, c] = *sym.terms().begin();
        ok = key.g.cliff == GradedNumber::kBasis[idx] && c == Rational(s) &&
             prod == GradedNumber::basis(GradedNumber::kBasis[idx], s);
      }
      agree += ok;
    }
  o.need(agree == 16, std::to_string(agree) + "/16 entries agree");
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"superalgebra brackets and Jacobi identity", c1},
    {"Euler-Lagrange equation of the superfield Lagrangian", c2},
    {"component field equations", c3},
    {"auto-Backlund theorem", c4},
    {"a-series, closed form and recursion", c5},
    {"current conservation", c6},
    {"conservation audit determinism and oracle agreement", c7},
    {"numerics", c8},
    {"GradedNumber table vs symbolic normalization", c9},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> pick;
  for (int i = 1; i < argc; ++i) pick.push_back(std::atoi(argv[i]));
  if (pick.empty())
    for (size_t i = 1; i <= kCriteria.size(); ++i) pick.push_back(static_cast<int>(i));
  bool all = true;
  for (int n : pick) {
    if (n < 1 || n > static_cast<int>(kCriteria.size())) {
      std::cerr << "no criterion " << n << "\n";
      return 2;
    }
    const auto& [name, fn] = kCriteria[n - 1];
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.need(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << name << "\n";
    for (const auto& s : o.notes) std::cout << "    " << s << "\n";
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
