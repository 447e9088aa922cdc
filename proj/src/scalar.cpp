#include "zzsg/scalar.hpp"

#include <algorithm>

namespace zzsg {

namespace {

const std::string kPi = "pi";

std::strong_ordering cmp_rational(const Rational& a, const Rational& b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::strong_ordering cmp_arg(const LinearArg& a, const LinearArg& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (auto c = a[i].first <=> b[i].first; c != 0) return c;
    if (auto c = cmp_rational(a[i].second, b[i].second); c != 0) return c;
  }
  return a.size() <=> b.size();
}

// Floor of a rational.
Integer floor_div(const Rational& r) {
  Integer q = numerator(r) / denominator(r);
  if (numerator(r) < 0 && q * denominator(r) != numerator(r)) q -= 1;
  return q;
}

}  // namespace

LinearArg arg_add(const LinearArg& a, const LinearArg& b, int sign_b) {
  LinearArg out;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, b[j].second * sign_b);
      ++j;
    } else {
      Rational c = a[i].second + b[j].second * sign_b;
      if (c != 0) out.emplace_back(a[i].first, c);
      ++i;
      ++j;
    }
  }
  return out;
}

LinearArg arg_scale(const LinearArg& a, const Rational& s) {
  if (s == 0) return {};
  LinearArg out = a;
  for (auto& [_, c] : out) c *= s;
  return out;
}

std::strong_ordering TrigAtom::operator<=>(const TrigAtom& o) const {
  if (auto c = kind <=> o.kind; c != 0) return c;
  return cmp_arg(arg, o.arg);
}

std::string TrigAtom::str() const {
  if (kind == TrigKind::None) return "1";
  std::string s = kind == TrigKind::Sin ? "sin(" : "cos(";
  bool first = true;
  for (const auto& [sym, c] : arg) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    if (mag != 1) s += to_string(mag) + "*";
    s += sym;
    first = false;
  }
  return s + ")";
}

SignedTrig normalize_trig(TrigKind kind, LinearArg arg) {
  if (kind == TrigKind::None) return {1, {}};
  int sign = 1;
  Rational r = 0;
  LinearArg w;
  for (auto& [sym, c] : arg) {
    if (c == 0) continue;
    if (sym == kPi) {
      r += c;
    } else {
      w.emplace_back(sym, c);
    }
  }
  // Reduces r into [0, 1/2) using the pi and pi/2 shifts.
  auto reduce = [&]() {
    r -= Rational(2 * floor_div(r / 2));
    if (r >= 1) {
      sign = -sign;
      r -= 1;
    }
    if (r * 2 >= 1) {
      r -= Rational(1, 2);
      if (kind == TrigKind::Sin) {
        kind = TrigKind::Cos;
      } else {
        kind = TrigKind::Sin;
        sign = -sign;
      }
    }
  };
  reduce();
  if (!w.empty() && w.front().second < 0) {
    for (auto& [_, c] : w) c = -c;
    r = -r;
    if (kind == TrigKind::Sin) sign = -sign;
    reduce();
  }
  if (w.empty() && r == 0) {
    if (kind == TrigKind::Sin) return {0, {}};
    return {sign, {}};
  }
  TrigAtom atom{kind, std::move(w)};
  if (r != 0) {
    auto pos = std::lower_bound(atom.arg.begin(), atom.arg.end(), kPi,
                                [](const auto& p, const std::string& s) { return p.first < s; });
    atom.arg.insert(pos, {kPi, r});
  }
  return {sign, std::move(atom)};
}

std::vector<std::pair<Rational, TrigAtom>> trig_product(const TrigAtom& a, const TrigAtom& b) {
  if (a.kind == TrigKind::None) return {{1, b}};
  if (b.kind == TrigKind::None) return {{1, a}};
  LinearArg sum = arg_add(a.arg, b.arg);
  LinearArg diff = arg_add(a.arg, b.arg, -1);
  std::vector<std::pair<Rational, TrigAtom>> out;
  auto push = [&](Rational c, TrigKind k, const LinearArg& arg) {
    auto st = normalize_trig(k, arg);
    if (st.sign == 0) return;
    c *= st.sign;
    for (auto& [oc, oa] : out) {
      if (oa == st.atom) {
        oc += c;
        return;
      }
    }
    out.emplace_back(c, st.atom);
  };
  Rational h(1, 2);
  if (a.kind == TrigKind::Sin && b.kind == TrigKind::Sin) {
    push(h, TrigKind::Cos, diff);
    push(-h, TrigKind::Cos, sum);
  } else if (a.kind == TrigKind::Cos && b.kind == TrigKind::Cos) {
    push(h, TrigKind::Cos, diff);
    push(h, TrigKind::Cos, sum);
  } else if (a.kind == TrigKind::Sin) {  // sin a cos b
    push(h, TrigKind::Sin, sum);
    push(h, TrigKind::Sin, diff);
  } else {  // cos a sin b
    push(h, TrigKind::Sin, sum);
    push(-h, TrigKind::Sin, diff);
  }
  std::erase_if(out, [](const auto& p) { return p.first == 0; });
  return out;
}

JetMonomial jet_monomial_mul(const JetMonomial& a, const JetMonomial& b) {
  JetMonomial out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

std::strong_ordering ScalarKey::operator<=>(const ScalarKey& o) const {
  size_t n = std::min(jets.size(), o.jets.size());
  for (size_t i = 0; i < n; ++i) {
    if (auto c = jets[i].first <=> o.jets[i].first; c != 0) return c;
    if (auto c = jets[i].second <=> o.jets[i].second; c != 0) return c;
  }
  if (auto c = jets.size() <=> o.jets.size(); c != 0) return c;
  return trig <=> o.trig;
}

std::vector<std::pair<Rational, ScalarKey>> scalar_key_mul(const ScalarKey& a, const ScalarKey& b) {
  JetMonomial jets = jet_monomial_mul(a.jets, b.jets);
  std::vector<std::pair<Rational, ScalarKey>> out;
  for (auto& [c, t] : trig_product(a.trig, b.trig)) out.emplace_back(c, ScalarKey{jets, t});
  return out;
}

ScalarExpr::ScalarExpr(const Rational& c) {
  if (c != 0) terms_.emplace(ScalarKey{}, c);
}

ScalarExpr ScalarExpr::from_key(const ScalarKey& k, const Rational& c) {
  ScalarExpr e;
  e.add_term(k, c);
  return e;
}

ScalarExpr ScalarExpr::jet(const Jet& j) {
  return from_key(ScalarKey{{{j, 1}}, {}});
}

ScalarExpr ScalarExpr::trig(TrigKind kind, const LinearArg& arg) {
  auto st = normalize_trig(kind, arg);
  return from_key(ScalarKey{{}, st.atom}, st.sign);
}

void ScalarExpr::add_term(const ScalarKey& k, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

ScalarExpr ScalarExpr::operator+(const ScalarExpr& o) const {
  ScalarExpr r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k, c);
  return r;
}

ScalarExpr ScalarExpr::operator-(const ScalarExpr& o) const {
  ScalarExpr r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k, -c);
  return r;
}

ScalarExpr ScalarExpr::operator*(const Rational& c) const {
  ScalarExpr r;
  if (c == 0) return r;
  for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
  return r;
}

ScalarExpr ScalarExpr::operator*(const ScalarExpr& o) const {
  ScalarExpr r;
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_)
      for (const auto& [c, k] : scalar_key_mul(ka, kb)) r.add_term(k, ca * cb * c);
  return r;
}

std::string ScalarExpr::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    Rational mag = c < 0 ? Rational(-c) : c;
    s += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
    std::vector<std::string> f;
    if (mag != 1 || k.is_one()) f.push_back(to_string(mag));
    for (const auto& [j, e] : k.jets)
      for (int i = 0; i < e; ++i) f.push_back(j.str());
    if (k.trig.kind != TrigKind::None) f.push_back(k.trig.str());
    for (size_t i = 0; i < f.size(); ++i) s += (i ? "*" : "") + f[i];
    first = false;
  }
  return s;
}

ScalarExpr trig_canonicalize(const std::vector<RawScalarTerm>& raw) {
  ScalarExpr out;
  for (const auto& t : raw) {
    std::vector<std::pair<Rational, TrigAtom>> acc{{t.coefficient, TrigAtom{}}};
    for (const auto& [kind, arg] : t.trig_factors) {
      auto st = normalize_trig(kind, arg);
      if (st.sign == 0) {
        acc.clear();
        break;
      }
      std::vector<std::pair<Rational, TrigAtom>> next;
      for (const auto& [c, a] : acc)
        for (const auto& [c2, a2] : trig_product(a, st.atom)) next.emplace_back(c * c2 * st.sign, a2);
      acc = std::move(next);
    }
    JetMonomial jets;
    for (const auto& [j, e] : t.jets) jets = jet_monomial_mul(jets, JetMonomial{{j, e}});
    for (const auto& [c, a] : acc) out.add_term(ScalarKey{jets, a}, c);
  }
  return out;
}

}  // namespace zzsg
