#include "zzsg/fields.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>

#include "zzsg/error.hpp"

namespace zzsg {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::MixedParameterFamilies: return "MixedParameterFamilies";
    case ErrorKind::NotScalarDegree: return "NotScalarDegree";
    case ErrorKind::NonNilpotentRemainder: return "NonNilpotentRemainder";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::WeightMismatch: return "WeightMismatch";
    case ErrorKind::OutsideWindow: return "OutsideWindow";
    case ErrorKind::InhomogeneousDegree: return "InhomogeneousDegree";
    case ErrorKind::InhomogeneousWeight: return "InhomogeneousWeight";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::UnsupportedAtom: return "UnsupportedAtom";
    case ErrorKind::NonTermination: return "NonTermination";
    case ErrorKind::UnresolvedGenerator: return "UnresolvedGenerator";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::VelocityOutOfRange: return "VelocityOutOfRange";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::InconsistentSystem: return "InconsistentSystem";
    case ErrorKind::GoldenMismatch: return "GoldenMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

namespace {

struct Registry {
  std::shared_mutex mu;
  std::map<std::string, FieldInfo> fields;
};

void add_components(std::map<std::string, FieldInfo>& f, const std::string& superfield) {
  auto c = component_names(superfield);
  auto put = [&](const std::string& name, Degree d, int w) {
    f.try_emplace(name, FieldInfo{name, d, BoostWeight{w}, false, false});
  };
  put(c.X, kDeg00, 0);
  put(c.psi_p, kDeg01, 1);
  put(c.psi_m, kDeg10, -1);
  put(c.F, kDeg11, 0);
  put(c.G, kDeg11, 0);
  put(c.chi_p, kDeg10, 1);
  put(c.chi_m, kDeg01, -1);
  put(c.Y, kDeg00, 0);
  f.try_emplace(superfield, FieldInfo{superfield, kDeg00, BoostWeight{0}, true, false});
}

Registry& registry() {
  static Registry r;
  static const bool seeded = [] {
    add_components(r.fields, "Phi");
    add_components(r.fields, "Phi~");
    r.fields.emplace("pi", FieldInfo{"pi", kDeg00, BoostWeight{0}, false, true});
    return true;
  }();
  (void)seeded;
  return r;
}

}  // namespace

ComponentNames component_names(const std::string& superfield) {
  std::string suffix;
  if (superfield == "Phi") {
    suffix = "";
  } else if (superfield == "Phi~") {
    suffix = "~";
  } else {
    suffix = "{" + superfield + "}";
  }
  return {"X" + suffix,   "psi+" + suffix, "psi-" + suffix, "F" + suffix,
          "G" + suffix,   "chi+" + suffix, "chi-" + suffix, "Y" + suffix};
}

void register_superfield(const std::string& superfield) {
  auto& r = registry();
  std::unique_lock lock(r.mu);
  add_components(r.fields, superfield);
}

void register_field(const FieldInfo& info) {
  auto& r = registry();
  std::unique_lock lock(r.mu);
  auto [it, inserted] = r.fields.try_emplace(info.name, info);
  if (!inserted) {
    const auto& o = it->second;
    if (o.degree != info.degree || o.weight != info.weight || o.abstract != info.abstract ||
        o.constant != info.constant)
      throw Error(ErrorKind::InvalidArgument, "conflicting definition of field " + info.name);
  }
}

const FieldInfo& field_info(const std::string& name) {
  auto& r = registry();
  std::shared_lock lock(r.mu);
  auto it = r.fields.find(name);
  if (it == r.fields.end()) throw Error(ErrorKind::UnknownSymbol, name);
  return it->second;  // map nodes are stable
}

bool has_field(const std::string& name) {
  auto& r = registry();
  std::shared_lock lock(r.mu);
  return r.fields.count(name) != 0;
}

Jet make_jet(const std::string& field, int m, int n, bool dm, bool dp) {
  const auto& info = field_info(field);
  if ((dm || dp) && !info.abstract)
    throw Error(ErrorKind::UnsupportedAtom, "D-derivative atom on component field " + field);
  Jet j;
  j.field = field;
  j.m = m;
  j.n = n;
  j.dm = dm;
  j.dp = dp;
  j.abstract = info.abstract;
  j.constant = info.constant;
  j.degree = info.degree;
  if (dm) j.degree = j.degree + kDeg01;
  if (dp) j.degree = j.degree + kDeg10;
  j.weight = BoostWeight{info.weight.half_units + 2 * m - 2 * n + (dm ? 1 : 0) - (dp ? 1 : 0)};
  return j;
}

std::string Jet::str() const {
  std::string s;
  if (dm) s += "D- ";
  if (dp) s += "D+ ";
  s += field;
  if (m + n > 0) {
    s += "_{";
    s.append(static_cast<size_t>(m), '-');
    s.append(static_cast<size_t>(n), '+');
    s += "}";
  }
  return s;
}

}  // namespace zzsg
