#include "zzsg/model.hpp"

namespace zzsg {

namespace {

const Rational kHalf(1, 2);

GradedExpr J(const std::string& f, int m = 0, int n = 0, bool dm = false, bool dp = false) {
  return GradedExpr::jet(make_jet(f, m, n, dm, dp));
}

GradedExpr alpha() { return GradedExpr::cliff(Cliff::Alpha); }

GradedExpr sin_half(const std::string& body) {
  return GradedExpr::scalar(ScalarExpr::trig(TrigKind::Sin, {{body, kHalf}}));
}

GradedExpr cos_half(const std::string& body) {
  return GradedExpr::scalar(ScalarExpr::trig(TrigKind::Cos, {{body, kHalf}}));
}

GradedExpr apply_n(const Derivation& d, GradedExpr e, int n) {
  for (int i = 0; i < n; ++i) e = apply(d, e);
  return e;
}

}  // namespace

LagrangianExpr sine_gordon_lagrangian(const std::string& field) {
  register_superfield(field);
  GradedExpr kin = J(field, 0, 0, true, false) * J(field, 0, 0, false, true);
  GradedExpr pot = alpha() * (GradedExpr::constant(1) - cos_half(field)) * Rational(2);
  return {field, kin - pot};
}

GradedExpr partial(const GradedExpr& e, const Jet& atom) {
  DerivationAction d{atom.degree, [](Coord) { return GradedExpr(); },
                     [&](const Jet& j) {
                       return j == atom ? GradedExpr::constant(1) : GradedExpr();
                     }};
  return apply_derivation(e, d);
}

GradedExpr euler_lagrange(const LagrangianExpr& L) {
  for (const Jet& j : jets_of(L.expr)) {
    if (j.field != L.field) continue;
    if (j.m || j.n || (j.dm && j.dp))
      throw Error(ErrorKind::UnsupportedAtom, "Lagrangian depends on " + j.str());
  }
  Jet phi = make_jet(L.field), phim = make_jet(L.field, 0, 0, true, false),
      phip = make_jet(L.field, 0, 0, false, true);
  return apply(deriv_Dm(), partial(L.expr, phim)) + apply(deriv_Dp(), partial(L.expr, phip)) -
         partial(L.expr, phi);
}

GradedExpr sg_residual(const GradedExpr& F, const JetResolver& r) {
  GradedExpr a = apply(deriv_Dm(), apply(deriv_Dp(), F, r), r);
  GradedExpr b = apply(deriv_Dp(), apply(deriv_Dm(), F, r), r);
  return a + b + GradedExpr::cliff(Cliff::Alpha, F.truncation()) * trig_of(TrigKind::Sin, F, kHalf);
}

namespace {

// Highest-order jet appearing linearly (alone in its term) and its coefficient.
std::optional<std::pair<Jet, Rational>> leading_jet(const GradedExpr& e) {
  std::optional<std::pair<Jet, Rational>> best;
  for (const auto& [k, c] : e.terms()) {
    GradedKey head = k.g;
    head.gjets.clear();
    if (!head.is_one() || k.s.trig.kind != TrigKind::None) continue;
    std::optional<Jet> j;
    if (k.g.gjets.size() == 1 && k.s.jets.empty()) j = k.g.gjets[0];
    if (k.g.gjets.empty() && k.s.jets.size() == 1 && k.s.jets[0].second == 1) j = k.s.jets[0].first;
    if (!j) continue;
    if (!best || j->m + j->n > best->first.m + best->first.n) best = std::make_pair(*j, c);
  }
  return best;
}

}  // namespace

std::vector<ComponentEquation> component_equations(bool eliminate_auxiliary, const std::string& field) {
  SuperField F = generic_superfield(field, 0);
  auto names = component_names(field);
  GradedExpr R = sg_residual(F);
  std::vector<std::pair<std::string, GradedExpr>> sectors{
      {"1", theta_component(R, false, false)},
      {"theta-", theta_component(R, true, false)},
      {"theta+", theta_component(R, false, true)},
      {"theta-theta+", theta_component(R, true, true)}};
  Bindings aux{{make_jet(names.F), alpha() * sin_half(names.X) * -kHalf}};
  std::vector<ComponentEquation> out;
  for (auto& [name, e] : sectors) {
    if (eliminate_auxiliary) e = substitute(e, aux);
    if (e.is_zero()) continue;
    auto lead = leading_jet(e);
    if (!lead) throw Error(ErrorKind::InconsistentSystem, "no linear leading jet in " + e.str());
    out.push_back({name, lead->first, e * (Rational(1) / lead->second)});
  }
  return out;
}

// ---------------------------------------------------------------------------

OnShellRewriter::OnShellRewriter(std::vector<std::string> superfields, int max_depth)
    : fields_(std::move(superfields)), max_depth_(max_depth) {
  for (const auto& f : fields_) register_superfield(f);
}

std::optional<GradedExpr> OnShellRewriter::rule_for(const Jet& j) const { return derive(j, 0); }

std::optional<GradedExpr> OnShellRewriter::derive(const Jet& j, int depth) const {
  std::lock_guard lock(mu_);
  if (auto it = cache_.find(j); it != cache_.end()) return it->second;
  if (depth > max_depth_) throw Error(ErrorKind::NonTermination, "on-shell rewriting of " + j.str());
  std::optional<GradedExpr> rhs;
  for (const auto& f : fields_) {
    auto c = component_names(f);
    const auto& Pm = deriv_Pm();
    const auto& Pp = deriv_Pp();
    if (j.field == c.X && j.m >= 1 && j.n >= 1) {
      GradedExpr base = GradedExpr::scalar(ScalarExpr::trig(TrigKind::Sin, {{c.X, 1}})) * Rational(1, 4) +
                        alpha() * J(c.psi_m) * J(c.psi_p) * sin_half(c.X) * kHalf;
      rhs = apply_n(Pp, apply_n(Pm, base, j.m - 1), j.n - 1);
    } else if (j.field == c.psi_p && j.n >= 1) {
      GradedExpr base = alpha() * J(c.psi_m) * cos_half(c.X) * -kHalf;
      rhs = apply_n(Pp, apply_n(Pm, base, j.m), j.n - 1);
    } else if (j.field == c.psi_m && j.m >= 1) {
      GradedExpr base = alpha() * J(c.psi_p) * cos_half(c.X) * -kHalf;
      rhs = apply_n(Pp, apply_n(Pm, base, j.m - 1), j.n);
    } else if (j.field == c.F) {
      GradedExpr base = alpha() * sin_half(c.X) * -kHalf;
      rhs = apply_n(Pp, apply_n(Pm, base, j.m), j.n);
    } else if (j.field == f && (j.m > 0 || j.dm) && (j.n > 0 || j.dp)) {
      // Expose one D- and one D+ using P = -2 D D, then act with the rest on the rule.
      int m = j.m, n = j.n;
      Rational factor = 1;
      bool extra_m = !j.dm, extra_p = !j.dp;
      if (extra_m) --m, factor *= -2;
      if (extra_p) --n, factor *= -2;
      GradedExpr r = alpha() * sin_half(f) * -kHalf;
      if (extra_p) r = apply(deriv_Dp(), r);
      if (extra_m) r = apply(deriv_Dm(), r);
      rhs = apply_n(Pp, apply_n(Pm, r, m), n) * factor;
    }
    if (rhs) break;
  }
  if (rhs) rhs = reduce_at(*rhs, depth + 1);
  cache_.emplace(j, rhs);
  return rhs;
}

GradedExpr OnShellRewriter::reduce_at(const GradedExpr& e, int depth) const {
  GradedExpr cur = e;
  for (int iter = 0;; ++iter) {
    if (iter > max_depth_) throw Error(ErrorKind::NonTermination, "on-shell rewriting did not settle");
    Bindings b;
    for (const Jet& j : jets_of(cur))
      if (auto r = derive(j, depth)) b.emplace(j, r->with_truncation(cur.truncation()));
    if (b.empty()) return cur;
    cur = substitute(cur, b);
  }
}

GradedExpr OnShellRewriter::reduce(const GradedExpr& e) const { return reduce_at(e, 0); }

GradedExpr reduce_on_shell(const GradedExpr& e, const OnShellRewriter& R) { return R.reduce(e); }

}  // namespace zzsg
