#include "zzsg/clifford.hpp"

#include <array>

#include "zzsg/error.hpp"

namespace zzsg {

Degree cliff_degree(Cliff c) {
  switch (c) {
    case Cliff::One: return kDeg00;
    case Cliff::Alpha: return kDeg11;
    case Cliff::LamP: return kDeg01;
    case Cliff::LamM: return kDeg10;
    case Cliff::EtaP: return kDeg10;
    case Cliff::EtaM: return kDeg01;
  }
  return kDeg00;
}

BoostWeight cliff_weight(Cliff c) {
  switch (c) {
    case Cliff::LamP: return {1};
    case Cliff::LamM: return {-1};
    case Cliff::EtaP: return {-1};
    case Cliff::EtaM: return {1};
    default: return {0};
  }
}

CliffFamily cliff_family(Cliff c) {
  switch (c) {
    case Cliff::LamP:
    case Cliff::LamM: return CliffFamily::Lambda;
    case Cliff::EtaP:
    case Cliff::EtaM: return CliffFamily::Eta;
    default: return CliffFamily::None;
  }
}

std::string cliff_name(Cliff c) {
  switch (c) {
    case Cliff::One: return "1";
    case Cliff::Alpha: return "alpha";
    case Cliff::LamP: return "lambda+";
    case Cliff::LamM: return "lambda-";
    case Cliff::EtaP: return "eta+";
    case Cliff::EtaM: return "eta-";
  }
  return "?";
}

namespace {

thread_local int g_commuting_depth = 0;

}  // namespace

bool spinor_params_commute() { return g_commuting_depth > 0; }

CommutingSpinorParams::CommutingSpinorParams() { ++g_commuting_depth; }
CommutingSpinorParams::~CommutingSpinorParams() { --g_commuting_depth; }

namespace {

// Maps the eta family onto lambda (eta+ -> lambda+, eta- -> lambda-); the
// eta relations are the lambda ones with v+ <-> v-, i.e. vpow negated.
Cliff to_lambda(Cliff c) {
  if (c == Cliff::EtaP) return Cliff::LamP;
  if (c == Cliff::EtaM) return Cliff::LamM;
  return c;
}

Cliff to_eta(Cliff c) {
  if (c == Cliff::LamP) return Cliff::EtaP;
  if (c == Cliff::LamM) return Cliff::EtaM;
  return c;
}

void check_families(Cliff a, Cliff b) {
  auto fa = cliff_family(a), fb = cliff_family(b);
  if (fa != CliffFamily::None && fb != CliffFamily::None && fa != fb)
    throw Error(ErrorKind::MixedParameterFamilies,
                cliff_name(a) + " * " + cliff_name(b) + " has no defined relation");
}

std::optional<CliffRule> lambda_base(Cliff a, Cliff b) {
  using C = Cliff;
  if (spinor_params_commute()) {
    if (a == C::LamM && b == C::LamP) return CliffRule{a, b, 1, 0, C::Alpha};
    if (a == C::Alpha && b == C::Alpha) return CliffRule{a, b, -1, 0, C::One};
  }
  if (a == C::LamP && b == C::LamM) return CliffRule{a, b, 1, 0, C::Alpha};
  if (a == C::LamM && b == C::LamP) return CliffRule{a, b, -1, 0, C::Alpha};
  if (a == C::LamP && b == C::LamP) return CliffRule{a, b, 1, 1, C::One};
  if (a == C::LamM && b == C::LamM) return CliffRule{a, b, -1, -1, C::One};
  if (a == C::Alpha && b == C::Alpha) return CliffRule{a, b, 1, 0, C::One};
  return std::nullopt;
}

std::optional<CliffRule> lambda_completion(Cliff a, Cliff b) {
  using C = Cliff;
  if (spinor_params_commute()) {
    if (a == C::Alpha && b == C::LamP) return CliffRule{a, b, 1, 1, C::LamM};
    if (a == C::Alpha && b == C::LamM) return CliffRule{a, b, -1, -1, C::LamP};
    if (a == C::LamP && b == C::Alpha) return CliffRule{a, b, 1, 1, C::LamM};
    if (a == C::LamM && b == C::Alpha) return CliffRule{a, b, -1, -1, C::LamP};
    return std::nullopt;
  }
  // alpha lambda+ = lambda+ lambda- lambda+ = -lambda+ lambda+ lambda- = -v+ lambda-
  if (a == C::Alpha && b == C::LamP) return CliffRule{a, b, -1, 1, C::LamM};
  // alpha lambda- = lambda+ lambda- lambda- = -v- lambda+
  if (a == C::Alpha && b == C::LamM) return CliffRule{a, b, -1, -1, C::LamP};
  // lambda+ alpha = lambda+ lambda+ lambda- = v+ lambda-
  if (a == C::LamP && b == C::Alpha) return CliffRule{a, b, 1, 1, C::LamM};
  // lambda- alpha = -lambda- lambda- lambda+ = v- lambda+
  if (a == C::LamM && b == C::Alpha) return CliffRule{a, b, 1, -1, C::LamP};
  return std::nullopt;
}

std::optional<CliffRule> mirror(std::optional<CliffRule> r, bool eta) {
  if (!r || !eta) return r;
  r->lhs0 = to_eta(r->lhs0);
  r->lhs1 = to_eta(r->lhs1);
  r->rhs = to_eta(r->rhs);
  r->vpow = -r->vpow;
  return r;
}

bool is_eta(Cliff a, Cliff b) {
  return cliff_family(a) == CliffFamily::Eta || cliff_family(b) == CliffFamily::Eta;
}

}  // namespace

std::optional<CliffRule> cliff_base_rule(Cliff a, Cliff b) {
  check_families(a, b);
  return mirror(lambda_base(to_lambda(a), to_lambda(b)), is_eta(a, b));
}

std::optional<CliffRule> cliff_rule(Cliff a, Cliff b) {
  check_families(a, b);
  bool eta = is_eta(a, b);
  Cliff la = to_lambda(a), lb = to_lambda(b);
  if (auto r = lambda_base(la, lb)) return mirror(r, eta);
  return mirror(lambda_completion(la, lb), eta);
}

CliffProduct reduce_cliff_word(const std::vector<Cliff>& word) {
  std::vector<Cliff> w;
  for (Cliff c : word)
    if (c != Cliff::One) w.push_back(c);
  CliffProduct p;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      if (auto r = cliff_rule(w[i], w[i + 1])) {
        p.sign *= r->sign;
        p.vpow += r->vpow;
        w.erase(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i) + 2);
        if (r->rhs != Cliff::One) w.insert(w.begin() + static_cast<long>(i), r->rhs);
        changed = true;
        break;
      }
    }
  }
  if (w.size() > 1) throw Error(ErrorKind::NonTermination, "irreducible Clifford word");
  p.elem = w.empty() ? Cliff::One : w.front();
  return p;
}

CliffProduct cliff_mul(Cliff a, Cliff b) {
  // 6x6 tables built once per variant from the rewrite rules; mixed families throw.
  static const auto build = [] {
    std::array<std::array<std::optional<CliffProduct>, 6>, 6> t{};
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        try {
          t[i][j] = reduce_cliff_word({static_cast<Cliff>(i), static_cast<Cliff>(j)});
        } catch (const Error&) {
        }
      }
    return t;
  };
  static const auto standard = build();
  static const auto commuting = [] {
    CommutingSpinorParams guard;
    return build();
  }();
  const auto& table = spinor_params_commute() ? commuting : standard;
  const auto& e = table[static_cast<int>(a)][static_cast<int>(b)];
  if (!e) check_families(a, b);
  return *e;
}

}  // namespace zzsg
