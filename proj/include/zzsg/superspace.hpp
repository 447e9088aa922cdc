#pragma once

// Superspace derivations P+-, Z, Q+-, D+- as vector fields on (z, theta-, theta+)
// with x-dependence carried by jet indices.

#include <functional>
#include <optional>
#include <string>

#include "zzsg/expr.hpp"
#include "zzsg/report.hpp"

namespace zzsg {

struct SuperField {
  std::string name;
  GradedExpr expr;
  Degree degree;
  BoostWeight weight;
  std::string body;  // name of the theta^0 z^0 component
};

enum class DerivKind { Pm, Pp, Z, Qm, Qp, Dm, Dp, Custom };

/// c_tm d/dtheta- + c_tp d/dtheta+ + c_z d/dz + c_pm P- + c_pp P+, coefficients on the left.
struct Derivation {
  std::string name;
  DerivKind kind = DerivKind::Custom;
  Degree degree;
  BoostWeight weight;
  GradedExpr c_tm, c_tp, c_z, c_pm, c_pp;
};

const Derivation& deriv_Pm();
const Derivation& deriv_Pp();
const Derivation& deriv_Z();
const Derivation& deriv_Qm();
const Derivation& deriv_Qp();
const Derivation& deriv_Dm();
const Derivation& deriv_Dp();
/// Looks up one of P-, P+, Z, Q-, Q+, D-, D+ by name.
const Derivation& derivation(const std::string& name);

/// Optional interception of a derivation acting on a jet atom (used by the
/// Backlund rewriting). Returning nullopt falls through to the default action.
using JetResolver = std::function<std::optional<GradedExpr>(const Derivation&, const Jet&)>;

GradedExpr apply(const Derivation& d, const GradedExpr& e, const JetResolver& resolver = {});

/// (D1 D2 - (-1)^<d1,d2> D2 D1) probe.
GradedExpr bracket(const Derivation& d1, const Derivation& d2, const SuperField& probe);

Report verify_superalgebra();

/// Common weight; throws InhomogeneousWeight naming the offending pair.
BoostWeight weight_of(const GradedExpr& e);

/// Scalar superfield with fresh components up to z-order nz (0 or 1).
SuperField generic_superfield(const std::string& name, int nz = 0);

/// The abstract superfield atom (Phi, Phi~, ...) as an expression.
GradedExpr superfield_atom(const std::string& name);

/// Replaces abstract superfield jets by the derivatives of their z-independent
/// component expansions.
GradedExpr realize(const GradedExpr& e);

}  // namespace zzsg
