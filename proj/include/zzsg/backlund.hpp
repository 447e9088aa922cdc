#pragma once

// Auto-Backlund systems for the graded sine-Gordon superfield, the a-series
// solution, currents and the conservation-law audit.

#include <utility>
#include <vector>

#include "zzsg/model.hpp"

namespace zzsg {

enum class Orientation { Minus, Plus };

struct BTSystem {
  Orientation orientation = Orientation::Minus;
  std::string seed = "Phi";
  std::string target = "Phi~";
  bool sabotage = false;  // flips the sign of the a^-1 rule
  Truncation trunc{};

  /// Derivation of the a-rule (D- for Minus) and of the a^-1 rule.
  const Derivation& d_a() const;
  const Derivation& d_b() const;
  /// Spinor parameter of the a-rule (lambda+ / eta+) and of the a^-1 rule.
  Cliff s_a() const;
  Cliff s_b() const;

  GradedExpr seed_atom() const;
  GradedExpr target_atom() const;
  /// d_a target = d_a seed + 2 a s_a sin((target + seed)/4)
  GradedExpr rhs_a() const;
  /// d_b target = -d_b seed + 2 a^-1 s_b sin((target - seed)/4)
  GradedExpr rhs_b() const;
};

BTSystem minus_system();
BTSystem plus_system();

/// Resolver replacing derivatives of the bare target atom by the BT right-hand sides.
JetResolver bt_resolver(const BTSystem& sys);

/// Eliminates every derivative jet of the target superfield.
GradedExpr bt_reduce(const GradedExpr& e, const BTSystem& sys);

/// D+(D- Phi~) - D-(D+ Phi~) computed from the rules (must vanish in the
/// z-independent setting).
GradedExpr bt_compatibility(const BTSystem& sys);

Report verify_auto_bt(const BTSystem& sys);

/// Coefficients Phi~_0 .. Phi~_N of the a-expansion, solved order by order
/// from the a^-1 rule (nonlinear terms included).
std::vector<GradedExpr> expand_series(const BTSystem& sys, int N);
/// sum_n a^n Phi~_n
GradedExpr series_sum(const std::vector<GradedExpr>& coeffs, Truncation t = {});

/// The closed form (-1)^{n+1} 2^{n+1} s_a^{2n} s_b^n d_b^n Phi.
GradedExpr closed_form_term(const BTSystem& sys, int n);

Report verify_closed_form(const BTSystem& sys, int N);
Report verify_redundancy(const BTSystem& sys, int N);

struct Currents {
  GradedExpr j_plus;
  GradedExpr j_minus;
};
Currents currents(const BTSystem& sys);
Report verify_current_conservation(const BTSystem& sys);

Report conservation_audit(const BTSystem& sys, int K);

/// Body shadow of the BT: relations (target jet, rhs) for d-X~ and d+X~.
struct BodyRelations {
  std::vector<std::pair<Jet, GradedExpr>> relations;
};
BodyRelations export_body_system(const BTSystem& sys);

/// Exchange of the light-cone sectors: D- <-> D+, theta- <-> theta+,
/// psi+ <-> psi-, lambda <-> eta, v+ <-> v-.
GradedExpr involution(const GradedExpr& e);

}  // namespace zzsg
