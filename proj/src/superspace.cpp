#include "zzsg/superspace.hpp"

#include <chrono>

namespace zzsg {

namespace {

GradedExpr th(Coord c, Rational k) { return GradedExpr::coord(c) * k; }

Derivation make(std::string name, DerivKind kind, Degree deg, int w) {
  Derivation d;
  d.name = std::move(name);
  d.kind = kind;
  d.degree = deg;
  d.weight = {w};
  return d;
}

const Rational kHalf(1, 2);

}  // namespace

const Derivation& deriv_Pm() {
  static const Derivation d = [] {
    auto d = make("P-", DerivKind::Pm, kDeg00, 2);
    d.c_pm = GradedExpr::constant(1);
    return d;
  }();
  return d;
}

const Derivation& deriv_Pp() {
  static const Derivation d = [] {
    auto d = make("P+", DerivKind::Pp, kDeg00, -2);
    d.c_pp = GradedExpr::constant(1);
    return d;
  }();
  return d;
}

const Derivation& deriv_Z() {
  static const Derivation d = [] {
    auto d = make("Z", DerivKind::Z, kDeg11, 0);
    d.c_z = GradedExpr::constant(1);
    return d;
  }();
  return d;
}

const Derivation& deriv_Qm() {
  static const Derivation d = [] {
    auto d = make("Q-", DerivKind::Qm, kDeg01, 1);
    d.c_tm = GradedExpr::constant(1);
    d.c_pm = th(Coord::ThetaM, kHalf);
    d.c_z = th(Coord::ThetaP, -kHalf);
    return d;
  }();
  return d;
}

const Derivation& deriv_Qp() {
  static const Derivation d = [] {
    auto d = make("Q+", DerivKind::Qp, kDeg10, -1);
    d.c_tp = GradedExpr::constant(1);
    d.c_pp = th(Coord::ThetaP, kHalf);
    d.c_z = th(Coord::ThetaM, kHalf);
    return d;
  }();
  return d;
}

const Derivation& deriv_Dm() {
  static const Derivation d = [] {
    auto d = make("D-", DerivKind::Dm, kDeg01, 1);
    d.c_tm = GradedExpr::constant(1);
    d.c_pm = th(Coord::ThetaM, -kHalf);
    d.c_z = th(Coord::ThetaP, kHalf);
    return d;
  }();
  return d;
}

const Derivation& deriv_Dp() {
  static const Derivation d = [] {
    auto d = make("D+", DerivKind::Dp, kDeg10, -1);
    d.c_tp = GradedExpr::constant(1);
    d.c_pp = th(Coord::ThetaP, -kHalf);
    d.c_z = th(Coord::ThetaM, -kHalf);
    return d;
  }();
  return d;
}

const Derivation& derivation(const std::string& name) {
  for (const Derivation* d : {&deriv_Pm(), &deriv_Pp(), &deriv_Z(), &deriv_Qm(), &deriv_Qp(),
                              &deriv_Dm(), &deriv_Dp()})
    if (d->name == name) return *d;
  throw Error(ErrorKind::UnknownSymbol, "no derivation named " + name);
}

namespace {

// Action on an abstract superfield jet, z-independent canonical word D- D+.
GradedExpr abstract_action(const Derivation& d, const Jet& j, Truncation t) {
  auto J = [&](int m, int n, bool dm, bool dp) {
    return GradedExpr::jet(make_jet(j.field, m, n, dm, dp), t);
  };
  switch (d.kind) {
    case DerivKind::Pm: return J(j.m + 1, j.n, j.dm, j.dp);
    case DerivKind::Pp: return J(j.m, j.n + 1, j.dm, j.dp);
    case DerivKind::Z: return GradedExpr(t);
    case DerivKind::Dm:
      if (!j.dm) return J(j.m, j.n, true, j.dp);
      return J(j.m + 1, j.n, false, j.dp) * -kHalf;
    case DerivKind::Dp:
      if (!j.dp) return J(j.m, j.n, j.dm, true);
      return J(j.m, j.n + 1, j.dm, false) * -kHalf;
    default:
      throw Error(ErrorKind::UnsupportedAtom, d.name + " on abstract atom " + j.str());
  }
}

}  // namespace

GradedExpr apply(const Derivation& d, const GradedExpr& e, const JetResolver& resolver) {
  const Truncation t = e.truncation();
  DerivationAction act{
      d.degree,
      [&](Coord c) {
        switch (c) {
          case Coord::ThetaM: return d.c_tm;
          case Coord::ThetaP: return d.c_tp;
          case Coord::Z: return d.c_z;
        }
        return GradedExpr();
      },
      [&](const Jet& j) {
        if (resolver) {
          if (auto r = resolver(d, j)) return *r;
        }
        if (j.abstract) return abstract_action(d, j, t);
        GradedExpr out(t);
        if (!d.c_pm.is_zero())
          out += d.c_pm * GradedExpr::jet(make_jet(j.field, j.m + 1, j.n), t);
        if (!d.c_pp.is_zero())
          out += d.c_pp * GradedExpr::jet(make_jet(j.field, j.m, j.n + 1), t);
        return out;
      }};
  return apply_derivation(e, act);
}

GradedExpr bracket(const Derivation& d1, const Derivation& d2, const SuperField& probe) {
  GradedExpr a = apply(d1, apply(d2, probe.expr));
  GradedExpr b = apply(d2, apply(d1, probe.expr));
  return commutation_sign(d1.degree, d2.degree) == 1 ? a - b : a + b;
}

BoostWeight weight_of(const GradedExpr& e) { return e.weight(); }

SuperField generic_superfield(const std::string& name, int nz) {
  register_superfield(name);
  auto c = component_names(name);
  auto J = [](const std::string& f) { return GradedExpr::jet(make_jet(f)); };
  auto tm = GradedExpr::coord(Coord::ThetaM), tp = GradedExpr::coord(Coord::ThetaP);
  GradedExpr e = J(c.X) + tm * J(c.psi_p) + tp * J(c.psi_m) + tm * tp * J(c.F);
  if (nz >= 1) {
    auto z = GradedExpr::coord(Coord::Z);
    e += z * (J(c.G) + tm * J(c.chi_p) + tp * J(c.chi_m) + tm * tp * J(c.Y));
  }
  return SuperField{name, e, kDeg00, {0}, c.X};
}

GradedExpr superfield_atom(const std::string& name) {
  register_superfield(name);
  return GradedExpr::jet(make_jet(name));
}

GradedExpr realize(const GradedExpr& e) {
  Bindings b;
  for (const Jet& j : jets_of(e)) {
    if (!j.abstract) continue;
    GradedExpr r = generic_superfield(j.field, 0).expr.with_truncation(e.truncation());
    if (j.dp) r = apply(deriv_Dp(), r);
    if (j.dm) r = apply(deriv_Dm(), r);
    for (int i = 0; i < j.n; ++i) r = apply(deriv_Pp(), r);
    for (int i = 0; i < j.m; ++i) r = apply(deriv_Pm(), r);
    b.emplace(j, std::move(r));
  }
  return b.empty() ? e : substitute(e, b);
}

// ---------------------------------------------------------------------------

namespace {

struct Op {
  std::string name;
  Degree degree;
  std::function<GradedExpr(const GradedExpr&)> f;
};

Op op_of(const Derivation& d) {
  return {d.name, d.degree, [&d](const GradedExpr& e) { return apply(d, e); }};
}

Op op_bracket(const Op& a, const Op& b) {
  int s = commutation_sign(a.degree, b.degree);
  return {"[" + a.name + "," + b.name + "]", a.degree + b.degree,
          [a, b, s](const GradedExpr& e) {
            GradedExpr x = a.f(b.f(e)), y = b.f(a.f(e));
            return s == 1 ? x - y : x + y;
          }};
}

}  // namespace

Report verify_superalgebra() {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.check = "superalgebra";
  SuperField probe = generic_superfield("Phi", 1);
  const GradedExpr& p = probe.expr;

  const std::vector<const Derivation*> gens{&deriv_Pm(), &deriv_Pp(), &deriv_Z(), &deriv_Qm(),
                                            &deriv_Qp()};
  auto expected = [&](const Derivation& a, const Derivation& b) -> GradedExpr {
    auto is = [&](const Derivation& x, const Derivation& y) {
      return (&a == &x && &b == &y) || (&a == &y && &b == &x);
    };
    if (is(deriv_Qm(), deriv_Qm())) return apply(deriv_Pm(), p);
    if (is(deriv_Qp(), deriv_Qp())) return apply(deriv_Pp(), p);
    if (is(deriv_Qm(), deriv_Qp())) return apply(deriv_Z(), p);
    if (is(deriv_Dm(), deriv_Dm())) return -apply(deriv_Pm(), p);
    if (is(deriv_Dp(), deriv_Dp())) return -apply(deriv_Pp(), p);
    if (is(deriv_Dm(), deriv_Dp())) return -apply(deriv_Z(), p);
    return GradedExpr();
  };
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = i; j < gens.size(); ++j)
      rep.add(Report::from_residual("[" + gens[i]->name + "," + gens[j]->name + "]",
                                    bracket(*gens[i], *gens[j], probe) - expected(*gens[i], *gens[j])));

  const std::vector<const Derivation*> ds{&deriv_Dm(), &deriv_Dp()};
  for (size_t i = 0; i < ds.size(); ++i)
    for (size_t j = i; j < ds.size(); ++j)
      rep.add(Report::from_residual("[" + ds[i]->name + "," + ds[j]->name + "]",
                                    bracket(*ds[i], *ds[j], probe) - expected(*ds[i], *ds[j])));
  for (const auto* q : {&deriv_Qm(), &deriv_Qp()})
    for (const auto* d : ds)
      rep.add(Report::from_residual("[" + q->name + "," + d->name + "]", bracket(*q, *d, probe)));

  // Graded Jacobi on all ordered triples.
  GradedExpr jac;
  for (const auto* a : gens)
    for (const auto* b : gens)
      for (const auto* c : gens) {
        Op A = op_of(*a), B = op_of(*b), C = op_of(*c);
        GradedExpr lhs = op_bracket(A, op_bracket(B, C)).f(p);
        GradedExpr r1 = op_bracket(op_bracket(A, B), C).f(p);
        GradedExpr r2 = op_bracket(B, op_bracket(A, C)).f(p);
        jac += lhs - r1 - r2 * Rational(commutation_sign(a->degree, b->degree));
      }
  rep.add(Report::from_residual("graded Jacobi", jac));

  // Weight and degree shifts.
  GradedExpr bad;
  std::string msg;
  for (const auto* d : {&deriv_Pm(), &deriv_Pp(), &deriv_Z(), &deriv_Qm(), &deriv_Qp(),
                        &deriv_Dm(), &deriv_Dp()}) {
    GradedExpr r = apply(*d, p);
    if (weight_of(r) != d->weight || r.degree() != d->degree) msg += d->name + " ";
  }
  Report w;
  w.check = "weight and degree shifts";
  w.status = msg.empty() ? Status::Pass : Status::Fail;
  w.details = msg.empty() ? "" : "mismatch for " + msg;
  rep.add(w);

  rep.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace zzsg
