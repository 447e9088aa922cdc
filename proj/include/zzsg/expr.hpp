#pragma once

// The graded-commutative expression kernel.
//
// A term is  c * z^k theta-^a theta+^b * C * v+^p * a^q * g1 ... gr * s
// with c rational, C a reduced Clifford basis element, g_i graded jets in
// normal order and s a scalar key (commuting jets times at most one trig
// atom). Expressions are always held in this canonical form, so equality is
// structural and is_zero is exact.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zzsg/clifford.hpp"
#include "zzsg/error.hpp"
#include "zzsg/fields.hpp"
#include "zzsg/scalar.hpp"

namespace zzsg {

enum class Coord : std::uint8_t { Z = 0, ThetaM = 1, ThetaP = 2 };

Degree coord_degree(Coord c);
BoostWeight coord_weight(Coord c);
std::string coord_name(Coord c);

/// z-order and a-Laurent window applied after every operation.
struct Truncation {
  int nz = 1;
  int amin = -2;
  int amax = 8;

  bool operator==(const Truncation&) const = default;
  Truncation intersect(const Truncation& o) const;
};

struct GradedKey {
  int zpow = 0;
  bool tm = false;
  bool tp = false;
  Cliff cliff = Cliff::One;
  int vpow = 0;
  int apow = 0;
  std::vector<Jet> gjets;  // normal-ordered, degree != (0,0)

  bool operator==(const GradedKey&) const = default;
  std::strong_ordering operator<=>(const GradedKey& o) const;

  Degree degree() const;
  BoostWeight weight() const;
  bool is_one() const;
};

struct TermKey {
  GradedKey g;
  ScalarKey s;

  bool operator==(const TermKey&) const = default;
  std::strong_ordering operator<=>(const TermKey& o) const {
    if (auto c = g <=> o.g; c != 0) return c;
    return s <=> o.s;
  }
  Degree degree() const { return g.degree(); }
  BoostWeight weight() const;
};

/// Product of two graded keys: sign and key, or nullopt when the product vanishes.
std::optional<std::pair<int, GradedKey>> graded_key_mul(const GradedKey& a, const GradedKey& b);

class GradedExpr {
 public:
  using Map = std::map<TermKey, Rational>;

  explicit GradedExpr(Truncation t = {}) : trunc_(t) {}

  static GradedExpr constant(const Rational& c, Truncation t = {});
  static GradedExpr coord(Coord c, Truncation t = {});
  static GradedExpr cliff(Cliff c, Truncation t = {});
  static GradedExpr vpow(int p, Truncation t = {});
  static GradedExpr apow(int p, Truncation t = {});
  static GradedExpr jet(const Jet& j, Truncation t = {});
  static GradedExpr scalar(const ScalarExpr& s, Truncation t = {});
  static GradedExpr term(const TermKey& k, const Rational& c, Truncation t = {});

  const Map& terms() const { return terms_; }
  const Truncation& truncation() const { return trunc_; }
  /// True when some term was dropped by the z-order or a-window.
  bool truncated() const { return truncated_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  void add_term(const TermKey& k, const Rational& c);
  GradedExpr with_truncation(Truncation t) const;

  GradedExpr operator+(const GradedExpr& o) const;
  GradedExpr operator-(const GradedExpr& o) const;
  GradedExpr operator-() const;
  GradedExpr operator*(const GradedExpr& o) const;
  GradedExpr operator*(const Rational& c) const;
  GradedExpr& operator+=(const GradedExpr& o);
  GradedExpr& operator-=(const GradedExpr& o);

  /// Structural equality of canonical forms (truncation metadata ignored).
  bool operator==(const GradedExpr& o) const { return terms_ == o.terms_; }

  /// Common degree; zero has degree (0,0). Throws InhomogeneousDegree.
  Degree degree() const;
  /// Common weight; zero has weight 0. Throws InhomogeneousWeight.
  BoostWeight weight() const;

  std::string str() const;

 private:
  Map terms_;
  Truncation trunc_;
  bool truncated_ = false;
};

inline GradedExpr operator*(const Rational& c, const GradedExpr& e) { return e * c; }

std::string term_str(const TermKey& k, const Rational& c, bool leading);

// ---------------------------------------------------------------------------
// Raw expression trees (parser output) and normalization.

struct RawExpr {
  enum class Op { Leaf, Sum, Product, Neg };
  Op op = Op::Leaf;
  GradedExpr leaf;
  std::vector<RawExpr> children;

  static RawExpr of(GradedExpr e) { return RawExpr{Op::Leaf, std::move(e), {}}; }
  static RawExpr sum(std::vector<RawExpr> c) { return RawExpr{Op::Sum, GradedExpr{}, std::move(c)}; }
  static RawExpr product(std::vector<RawExpr> c) {
    return RawExpr{Op::Product, GradedExpr{}, std::move(c)};
  }
};

/// Evaluates a raw tree into canonical form (sums and ordered products).
GradedExpr normalize(const RawExpr& e, Truncation t = {});

// ---------------------------------------------------------------------------
// Operations.

/// A graded derivation given by its action on coordinates and jets. Clifford
/// parameters, v, a and constant fields are annihilated.
struct DerivationAction {
  Degree degree;
  std::function<GradedExpr(Coord)> on_coord;
  std::function<GradedExpr(const Jet&)> on_jet;
};

/// Graded Leibniz extension: D(AB) = D(A) B + (-1)^<d, a> A D(B).
GradedExpr apply_derivation(const GradedExpr& e, const DerivationAction& d);

/// Body + nilpotent split of a degree-(0,0) expression.
struct BodySplit {
  LinearArg body;
  GradedExpr nilpotent;
};
BodySplit split_body(const GradedExpr& arg);

/// kind(half * arg) by finite Taylor expansion around the body.
GradedExpr trig_of(TrigKind kind, const GradedExpr& arg, const Rational& half = 1);

/// Replaces jet atoms (exactly matching, including body symbols inside trig
/// arguments) and renormalizes.
using Bindings = std::map<Jet, GradedExpr>;
GradedExpr substitute(const GradedExpr& e, const Bindings& bindings);

/// Coefficient of a^n (a-free). Throws OutsideWindow.
GradedExpr series_coefficient(const GradedExpr& e, int n);

/// Coefficient of z^k theta-^tm theta+^tp (theta-free).
GradedExpr theta_component(const GradedExpr& e, bool tm, bool tp, int zpow = 0);

/// Integer power.
GradedExpr pow(const GradedExpr& e, int k);

/// Set of jets (graded and scalar, including trig-argument symbols) occurring in e.
std::vector<Jet> jets_of(const GradedExpr& e);

}  // namespace zzsg
