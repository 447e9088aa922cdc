#pragma once

// Field registry and jet atoms.
//
// A jet atom is P-^m P+^n D-^dm D+^dp applied to a named field. Component
// fields (X, psi+, ...) only ever carry the P-derivatives; abstract
// superfields (Phi, Phi~) may also carry one D- and one D+ (z-independent
// canonical word D- D+).

#include <compare>
#include <string>
#include <tuple>
#include <vector>

#include "zzsg/grading.hpp"

namespace zzsg {

struct FieldInfo {
  std::string name;
  Degree degree;
  BoostWeight weight;
  bool abstract = false;  // superfield-level symbol
  bool constant = false;  // annihilated by every derivation (pi)
};

/// Registers a field; re-registering an identical definition is a no-op,
/// a conflicting one throws.
void register_field(const FieldInfo& info);
const FieldInfo& field_info(const std::string& name);
bool has_field(const std::string& name);

struct Jet {
  std::string field;
  int m = 0;  // number of P- (d/dx^-)
  int n = 0;  // number of P+ (d/dx^+)
  bool dm = false;
  bool dp = false;
  // Cached from the registry.
  Degree degree;
  BoostWeight weight;
  bool abstract = false;
  bool constant = false;

  auto key() const { return std::tie(field, m, n, dm, dp); }
  bool operator==(const Jet& o) const { return key() == o.key(); }
  std::strong_ordering operator<=>(const Jet& o) const {
    if (auto c = field <=> o.field; c != 0) return c;
    if (auto c = m <=> o.m; c != 0) return c;
    if (auto c = n <=> o.n; c != 0) return c;
    if (auto c = dm <=> o.dm; c != 0) return c;
    return dp <=> o.dp;
  }

  /// Degree (0,0) and no derivatives: may appear inside trig arguments.
  bool is_body_symbol() const { return degree.is_zero() && m == 0 && n == 0 && !dm && !dp; }
  bool is_scalar() const { return degree.is_zero(); }

  std::string str() const;
};

Jet make_jet(const std::string& field, int m = 0, int n = 0, bool dm = false, bool dp = false);

/// Component names of a generic superfield. "Phi" uses the bare names
/// (X, psi+, ...), "Phi~" the tilde names (X~, psi+~, ...), anything else
/// suffixes "{name}".
struct ComponentNames {
  std::string X, psi_p, psi_m, F, G, chi_p, chi_m, Y;
};
ComponentNames component_names(const std::string& superfield);

/// Registers the superfield as an abstract symbol together with its components.
void register_superfield(const std::string& superfield);

}  // namespace zzsg
