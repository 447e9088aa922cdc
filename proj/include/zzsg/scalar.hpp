#pragma once

// Scalar coefficients: rational multiples of (commuting jet monomial) x
// (at most one trig atom). Trig products are eliminated by product-to-sum.

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "zzsg/fields.hpp"
#include "zzsg/rational.hpp"

namespace zzsg {

enum class TrigKind : std::uint8_t { None = 0, Sin = 1, Cos = 2 };

/// Rational linear combination of body symbols, sorted by symbol name.
/// The symbol "pi" is reduced modulo the trig periods during normalization.
using LinearArg = std::vector<std::pair<std::string, Rational>>;

LinearArg arg_add(const LinearArg& a, const LinearArg& b, int sign_b = 1);
LinearArg arg_scale(const LinearArg& a, const Rational& s);

struct TrigAtom {
  TrigKind kind = TrigKind::None;
  LinearArg arg;

  bool operator==(const TrigAtom&) const = default;
  std::strong_ordering operator<=>(const TrigAtom& o) const;
  std::string str() const;
};

/// A signed trig atom produced by normalization; coefficient is -1, 0 or +1.
struct SignedTrig {
  int sign = 1;
  TrigAtom atom;
};

/// Canonical form of kind(arg): leading non-pi coefficient positive, the pi
/// offset reduced into [0, 1/2), sin(0) = 0, cos(0) = 1.
SignedTrig normalize_trig(TrigKind kind, LinearArg arg);

/// Product of two normalized trig atoms as a sum of at most two atoms.
std::vector<std::pair<Rational, TrigAtom>> trig_product(const TrigAtom& a, const TrigAtom& b);

/// Commuting jet monomial: sorted (jet, exponent>0) pairs, all of degree (0,0).
using JetMonomial = std::vector<std::pair<Jet, int>>;

JetMonomial jet_monomial_mul(const JetMonomial& a, const JetMonomial& b);

struct ScalarKey {
  JetMonomial jets;
  TrigAtom trig;

  bool operator==(const ScalarKey&) const = default;
  std::strong_ordering operator<=>(const ScalarKey& o) const;
  bool is_one() const { return jets.empty() && trig.kind == TrigKind::None; }
};

/// A canonical scalar expression; zero is the empty map.
class ScalarExpr {
 public:
  using Map = std::map<ScalarKey, Rational>;

  ScalarExpr() = default;
  explicit ScalarExpr(const Rational& c);
  static ScalarExpr from_key(const ScalarKey& k, const Rational& c = 1);
  static ScalarExpr jet(const Jet& j);
  static ScalarExpr trig(TrigKind kind, const LinearArg& arg);

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const ScalarKey& k, const Rational& c);
  ScalarExpr operator+(const ScalarExpr& o) const;
  ScalarExpr operator-(const ScalarExpr& o) const;
  ScalarExpr operator*(const ScalarExpr& o) const;
  ScalarExpr operator*(const Rational& c) const;
  bool operator==(const ScalarExpr& o) const = default;

  std::string str() const;

 private:
  Map terms_;
};

/// Multiplies two scalar keys: returns up to two (coefficient, key) pairs.
std::vector<std::pair<Rational, ScalarKey>> scalar_key_mul(const ScalarKey& a, const ScalarKey& b);

/// An uncanonicalized scalar term: any number of trig factors.
struct RawScalarTerm {
  Rational coefficient;
  JetMonomial jets;
  std::vector<std::pair<TrigKind, LinearArg>> trig_factors;
};

/// Eliminates all trig products and collects terms.
ScalarExpr trig_canonicalize(const std::vector<RawScalarTerm>& raw);

}  // namespace zzsg
