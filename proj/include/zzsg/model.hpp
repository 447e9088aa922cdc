#pragma once

// Graded sine-Gordon model: Lagrangian, Euler-Lagrange operator, field
// equations and on-shell rewriting.

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "zzsg/superspace.hpp"

namespace zzsg {

/// A Lagrangian in the atoms Phi, D-Phi, D+Phi of one abstract superfield.
struct LagrangianExpr {
  std::string field = "Phi";
  GradedExpr expr;
};

/// D-Phi D+Phi - 2 alpha (1 - cos(Phi/2)).
LagrangianExpr sine_gordon_lagrangian(const std::string& field = "Phi");

/// Left graded partial derivative with respect to a jet atom.
GradedExpr partial(const GradedExpr& e, const Jet& atom);

/// D-(dL/dPhi-) + D+(dL/dPhi+) - dL/dPhi. Throws UnsupportedAtom on higher jets.
GradedExpr euler_lagrange(const LagrangianExpr& L);

/// D-D+F + D+D-F + alpha sin(F/2).
GradedExpr sg_residual(const GradedExpr& F, const JetResolver& resolver = {});
inline GradedExpr sg_residual(const SuperField& F) { return sg_residual(F.expr); }

struct ComponentEquation {
  std::string sector;  // "1", "theta-", "theta+", "theta-theta+"
  Jet leading;
  GradedExpr residual;  // monic in the leading jet
};

/// Component field equations of the z-independent generic superfield.
/// With eliminate_auxiliary the auxiliary F is solved and substituted out.
std::vector<ComponentEquation> component_equations(bool eliminate_auxiliary,
                                                   const std::string& field = "Phi");

/// Oriented on-shell rules with lazily generated, cached prolongations.
class OnShellRewriter {
 public:
  explicit OnShellRewriter(std::vector<std::string> superfields = {"Phi"}, int max_depth = 64);

  /// Reduced right-hand side for a jet, or nullopt when no rule applies.
  std::optional<GradedExpr> rule_for(const Jet& j) const;
  GradedExpr reduce(const GradedExpr& e) const;

 private:
  std::optional<GradedExpr> derive(const Jet& j, int depth) const;
  GradedExpr reduce_at(const GradedExpr& e, int depth) const;

  std::vector<std::string> fields_;
  int max_depth_;
  mutable std::recursive_mutex mu_;
  mutable std::map<Jet, std::optional<GradedExpr>> cache_;
};

GradedExpr reduce_on_shell(const GradedExpr& e, const OnShellRewriter& R);

}  // namespace zzsg
