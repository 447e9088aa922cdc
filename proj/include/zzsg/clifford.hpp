#pragma once

// Clifford-valued constant parameters alpha, lambda+-, eta+- and the dual
// vector parameters v+- (v- = v+^{-1}).
//
// Relations:
//   lambda+ lambda- = alpha,  lambda- lambda+ = -alpha,
//   lambda+^2 = v+,  lambda-^2 = -v-,  alpha^2 = 1,  v+ v- = 1,
// and the eta family mirrored with v+ <-> v-:
//   eta+ eta- = alpha,  eta- eta+ = -alpha,  eta+^2 = v-,  eta-^2 = -v+.
// Completion by associativity adds alpha lambda+ = -v+ lambda- and friends.
// Every word reduces to sign * v+^k * b with b in {1, alpha, lambda+, lambda-}
// (or the eta analogue).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zzsg/grading.hpp"

namespace zzsg {

enum class Cliff : std::uint8_t { One = 0, Alpha, LamP, LamM, EtaP, EtaM };

enum class CliffFamily : std::uint8_t { None, Lambda, Eta };

Degree cliff_degree(Cliff c);
BoostWeight cliff_weight(Cliff c);
CliffFamily cliff_family(Cliff c);
std::string cliff_name(Cliff c);

/// Test hook: while an instance is alive on this thread, lambda- lambda+ =
/// +lambda+ lambda- (and likewise for eta). Used by sabotage checks.
class CommutingSpinorParams {
 public:
  CommutingSpinorParams();
  ~CommutingSpinorParams();
  CommutingSpinorParams(const CommutingSpinorParams&) = delete;
  CommutingSpinorParams& operator=(const CommutingSpinorParams&) = delete;
};
bool spinor_params_commute();

/// sign * v+^vpow * elem.
struct CliffProduct {
  int sign = 1;
  int vpow = 0;
  Cliff elem = Cliff::One;
};

/// One rewrite step on an adjacent pair, if a rule applies.
/// Returns the replacement as sign * v^vpow * (word of length 0 or 1).
struct CliffRule {
  Cliff lhs0, lhs1;
  int sign;
  int vpow;
  Cliff rhs;  // One means empty word
};

/// The oriented rewrite table: base relations plus their associativity
/// completion. Throws MixedParameterFamilies for lambda/eta pairs.
std::optional<CliffRule> cliff_rule(Cliff a, Cliff b);

/// Base relations only (no completion); used by the confluence oracle.
std::optional<CliffRule> cliff_base_rule(Cliff a, Cliff b);

/// Reduces a word to normal form, always rewriting the leftmost redex.
CliffProduct reduce_cliff_word(const std::vector<Cliff>& word);

/// Product of two basis elements (table generated from the rewrite rules).
CliffProduct cliff_mul(Cliff a, Cliff b);

}  // namespace zzsg
