#include "zzsg/expr.hpp"

#include <algorithm>
#include <set>

namespace zzsg {

Degree coord_degree(Coord c) {
  switch (c) {
    case Coord::Z: return kDeg11;
    case Coord::ThetaM: return kDeg01;
    case Coord::ThetaP: return kDeg10;
  }
  return kDeg00;
}

BoostWeight coord_weight(Coord c) {
  switch (c) {
    case Coord::Z: return {0};
    case Coord::ThetaM: return {-1};
    case Coord::ThetaP: return {1};
  }
  return {0};
}

std::string coord_name(Coord c) {
  switch (c) {
    case Coord::Z: return "z";
    case Coord::ThetaM: return "theta-";
    case Coord::ThetaP: return "theta+";
  }
  return "?";
}

Truncation Truncation::intersect(const Truncation& o) const {
  return {std::min(nz, o.nz), std::max(amin, o.amin), std::min(amax, o.amax)};
}

std::strong_ordering GradedKey::operator<=>(const GradedKey& o) const {
  if (auto c = zpow <=> o.zpow; c != 0) return c;
  if (auto c = tm <=> o.tm; c != 0) return c;
  if (auto c = tp <=> o.tp; c != 0) return c;
  if (auto c = cliff <=> o.cliff; c != 0) return c;
  if (auto c = vpow <=> o.vpow; c != 0) return c;
  if (auto c = apow <=> o.apow; c != 0) return c;
  return std::lexicographical_compare_three_way(gjets.begin(), gjets.end(), o.gjets.begin(),
                                                o.gjets.end());
}

Degree GradedKey::degree() const {
  Degree d;
  if (zpow & 1) d = d + kDeg11;
  if (tm) d = d + kDeg01;
  if (tp) d = d + kDeg10;
  d = d + cliff_degree(cliff);
  for (const auto& j : gjets) d = d + j.degree;
  return d;
}

BoostWeight GradedKey::weight() const {
  int w = (tm ? -1 : 0) + (tp ? 1 : 0) + cliff_weight(cliff).half_units + 2 * vpow;
  for (const auto& j : gjets) w += j.weight.half_units;
  return {w};
}

bool GradedKey::is_one() const {
  return zpow == 0 && !tm && !tp && cliff == Cliff::One && vpow == 0 && apow == 0 && gjets.empty();
}

BoostWeight TermKey::weight() const {
  int w = g.weight().half_units;
  for (const auto& [j, e] : s.jets) w += j.weight.half_units * e;
  return {w};
}

namespace {

struct Item {
  int cat;  // 0 z, 1 theta-, 2 theta+, 3 Clifford, 4 jet
  Degree deg;
  Cliff cliff = Cliff::One;
  const Jet* jet = nullptr;
};

bool item_greater(const Item& a, const Item& b) {
  if (a.cat != b.cat) return a.cat > b.cat;
  if (a.cat == 4) return *b.jet < *a.jet;
  return false;  // equal coordinates or Clifford items keep their order
}

void push_items(std::vector<Item>& items, const GradedKey& k) {
  for (int i = 0; i < k.zpow; ++i) items.push_back({0, kDeg11});
  if (k.tm) items.push_back({1, kDeg01});
  if (k.tp) items.push_back({2, kDeg10});
  if (k.cliff != Cliff::One) items.push_back({3, cliff_degree(k.cliff), k.cliff});
  for (const auto& j : k.gjets) items.push_back({4, j.degree, Cliff::One, &j});
}

}  // namespace

std::optional<std::pair<int, GradedKey>> graded_key_mul(const GradedKey& a, const GradedKey& b) {
  std::vector<Item> items;
  items.reserve(8 + a.gjets.size() + b.gjets.size());
  push_items(items, a);
  push_items(items, b);
  int sign = 1;
  // Stable bubble sort; every transposition of neighbours contributes its sign.
  for (size_t pass = 0; pass < items.size(); ++pass) {
    bool swapped = false;
    for (size_t i = 0; i + 1 < items.size(); ++i) {
      if (item_greater(items[i], items[i + 1])) {
        sign *= commutation_sign(items[i].deg, items[i + 1].deg);
        std::swap(items[i], items[i + 1]);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
  GradedKey out;
  out.vpow = a.vpow + b.vpow;
  out.apow = a.apow + b.apow;
  CliffProduct cp;
  for (size_t i = 0; i < items.size(); ++i) {
    const Item& it = items[i];
    switch (it.cat) {
      case 0: ++out.zpow; break;
      case 1:
        if (out.tm) return std::nullopt;
        out.tm = true;
        break;
      case 2:
        if (out.tp) return std::nullopt;
        out.tp = true;
        break;
      case 3: {
        auto p = cliff_mul(cp.elem, it.cliff);
        cp.sign *= p.sign;
        cp.vpow += p.vpow;
        cp.elem = p.elem;
        break;
      }
      case 4:
        if (!out.gjets.empty() && out.gjets.back() == *it.jet && pairing(it.deg, it.deg) == 1)
          return std::nullopt;
        out.gjets.push_back(*it.jet);
        break;
    }
  }
  out.cliff = cp.elem;
  out.vpow += cp.vpow;
  sign *= cp.sign;
  return std::make_pair(sign, std::move(out));
}

GradedExpr GradedExpr::term(const TermKey& k, const Rational& c, Truncation t) {
  GradedExpr e(t);
  e.add_term(k, c);
  return e;
}

GradedExpr GradedExpr::constant(const Rational& c, Truncation t) { return term(TermKey{}, c, t); }

GradedExpr GradedExpr::coord(Coord c, Truncation t) {
  TermKey k;
  if (c == Coord::Z) k.g.zpow = 1;
  if (c == Coord::ThetaM) k.g.tm = true;
  if (c == Coord::ThetaP) k.g.tp = true;
  return term(k, 1, t);
}

GradedExpr GradedExpr::cliff(Cliff c, Truncation t) {
  TermKey k;
  k.g.cliff = c;
  return term(k, 1, t);
}

GradedExpr GradedExpr::vpow(int p, Truncation t) {
  TermKey k;
  k.g.vpow = p;
  return term(k, 1, t);
}

GradedExpr GradedExpr::apow(int p, Truncation t) {
  TermKey k;
  k.g.apow = p;
  return term(k, 1, t);
}

GradedExpr GradedExpr::jet(const Jet& j, Truncation t) {
  TermKey k;
  if (j.is_scalar()) {
    k.s.jets.emplace_back(j, 1);
  } else {
    k.g.gjets.push_back(j);
  }
  return term(k, 1, t);
}

GradedExpr GradedExpr::scalar(const ScalarExpr& s, Truncation t) {
  GradedExpr e(t);
  for (const auto& [k, c] : s.terms()) e.add_term(TermKey{GradedKey{}, k}, c);
  return e;
}

void GradedExpr::add_term(const TermKey& k, const Rational& c) {
  if (c == 0) return;
  if (k.g.zpow > trunc_.nz || k.g.apow < trunc_.amin || k.g.apow > trunc_.amax) {
    truncated_ = true;
    return;
  }
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

GradedExpr GradedExpr::with_truncation(Truncation t) const {
  GradedExpr r(t);
  r.truncated_ = truncated_;
  for (const auto& [k, c] : terms_) r.add_term(k, c);
  return r;
}

GradedExpr GradedExpr::operator+(const GradedExpr& o) const {
  GradedExpr r = *this;
  r += o;
  return r;
}

GradedExpr& GradedExpr::operator+=(const GradedExpr& o) {
  if (!(o.trunc_ == trunc_)) *this = with_truncation(trunc_.intersect(o.trunc_));
  truncated_ = truncated_ || o.truncated_;
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

GradedExpr& GradedExpr::operator-=(const GradedExpr& o) {
  if (!(o.trunc_ == trunc_)) *this = with_truncation(trunc_.intersect(o.trunc_));
  truncated_ = truncated_ || o.truncated_;
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

GradedExpr GradedExpr::operator-(const GradedExpr& o) const {
  GradedExpr r = *this;
  r -= o;
  return r;
}

GradedExpr GradedExpr::operator-() const { return *this * Rational(-1); }

GradedExpr GradedExpr::operator*(const Rational& c) const {
  GradedExpr r(trunc_);
  r.truncated_ = truncated_;
  if (c == 0) return r;
  for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
  return r;
}

GradedExpr GradedExpr::operator*(const GradedExpr& o) const {
  GradedExpr r(trunc_.intersect(o.trunc_));
  r.truncated_ = truncated_ || o.truncated_;
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : o.terms_) {
      auto g = graded_key_mul(ka.g, kb.g);
      if (!g) continue;
      for (const auto& [c, s] : scalar_key_mul(ka.s, kb.s))
        r.add_term(TermKey{g->second, s}, ca * cb * c * g->first);
    }
  }
  return r;
}

Degree GradedExpr::degree() const {
  std::optional<Degree> d;
  for (const auto& [k, c] : terms_) {
    Degree dk = k.degree();
    if (d && *d != dk)
      throw Error(ErrorKind::InhomogeneousDegree, d->str() + " vs " + dk.str() + " in " + str());
    d = dk;
  }
  return d.value_or(kDeg00);
}

BoostWeight GradedExpr::weight() const {
  std::optional<std::pair<BoostWeight, const TermKey*>> w;
  for (const auto& [k, c] : terms_) {
    BoostWeight wk = k.weight();
    if (w && w->first != wk)
      throw Error(ErrorKind::InhomogeneousWeight,
                  term_str(*w->second, 1, true) + " (" + w->first.str() + ") vs " +
                      term_str(k, 1, true) + " (" + wk.str() + ")");
    if (!w) w = std::make_pair(wk, &k);
  }
  return w ? w->first : BoostWeight{0};
}

std::string term_str(const TermKey& k, const Rational& c, bool leading) {
  std::string s;
  Rational mag = c < 0 ? Rational(-c) : c;
  s += leading ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
  std::vector<std::string> f;
  bool bare = k.g.is_one() && k.s.is_one();
  if (mag != 1 || bare) f.push_back(to_string(mag));
  if (k.g.zpow == 1) f.push_back("z");
  if (k.g.zpow > 1) f.push_back("z^" + std::to_string(k.g.zpow));
  if (k.g.tm) f.push_back("theta-");
  if (k.g.tp) f.push_back("theta+");
  if (k.g.cliff != Cliff::One) f.push_back(cliff_name(k.g.cliff));
  if (k.g.vpow == 1) f.push_back("v+");
  if (k.g.vpow > 1) f.push_back("v+^" + std::to_string(k.g.vpow));
  if (k.g.vpow == -1) f.push_back("v-");
  if (k.g.vpow < -1) f.push_back("v-^" + std::to_string(-k.g.vpow));
  if (k.g.apow == 1) f.push_back("a");
  if (k.g.apow != 0 && k.g.apow != 1) f.push_back("a^" + std::to_string(k.g.apow));
  for (const auto& j : k.g.gjets) f.push_back(j.str());
  for (const auto& [j, e] : k.s.jets) f.push_back(e == 1 ? j.str() : j.str() + "^" + std::to_string(e));
  if (k.s.trig.kind != TrigKind::None) f.push_back(k.s.trig.str());
  for (size_t i = 0; i < f.size(); ++i) s += (i ? "*" : "") + f[i];
  return s;
}

std::string GradedExpr::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    s += term_str(k, c, first);
    first = false;
  }
  return s;
}

GradedExpr normalize(const RawExpr& e, Truncation t) {
  switch (e.op) {
    case RawExpr::Op::Leaf: return e.leaf.with_truncation(t.intersect(e.leaf.truncation()));
    case RawExpr::Op::Neg: return -normalize(e.children.at(0), t);
    case RawExpr::Op::Sum: {
      GradedExpr r(t);
      for (const auto& c : e.children) r += normalize(c, t);
      return r;
    }
    case RawExpr::Op::Product: {
      GradedExpr r = GradedExpr::constant(1, t);
      for (const auto& c : e.children) r = r * normalize(c, t);
      return r;
    }
  }
  return GradedExpr(t);
}

// ---------------------------------------------------------------------------

namespace {

GradedExpr derive_jet(const Jet& j, const DerivationAction& d, Truncation t) {
  if (j.constant) return GradedExpr(t);
  return d.on_jet(j).with_truncation(t);
}

// Derivative of the scalar part (degree 0, so no Leibniz signs inside it).
GradedExpr derive_scalar(const ScalarKey& s, const DerivationAction& d, Truncation t) {
  GradedExpr out(t);
  for (size_t i = 0; i < s.jets.size(); ++i) {
    const auto& [j, e] = s.jets[i];
    GradedExpr dj = derive_jet(j, d, t);
    if (dj.is_zero()) continue;
    ScalarKey rest = s;
    if (e == 1) {
      rest.jets.erase(rest.jets.begin() + static_cast<long>(i));
    } else {
      rest.jets[i].second = e - 1;
    }
    out += GradedExpr::term(TermKey{GradedKey{}, rest}, e, t) * dj;
  }
  if (s.trig.kind != TrigKind::None) {
    GradedExpr darg(t);
    for (const auto& [sym, c] : s.trig.arg) darg += derive_jet(make_jet(sym), d, t) * c;
    if (!darg.is_zero()) {
      ScalarKey poly{s.jets, {}};
      bool is_sin = s.trig.kind == TrigKind::Sin;
      TrigKind dk = is_sin ? TrigKind::Cos : TrigKind::Sin;
      auto st = normalize_trig(dk, s.trig.arg);
      Rational c = is_sin ? 1 : -1;
      c *= st.sign;
      out += GradedExpr::term(TermKey{GradedKey{}, ScalarKey{poly.jets, st.atom}}, c, t) * darg;
    }
  }
  return out;
}

}  // namespace

GradedExpr apply_derivation(const GradedExpr& e, const DerivationAction& d) {
  const Truncation t = e.truncation();
  GradedExpr out(t);
  for (const auto& [k, c] : e.terms()) {
    // Graded factors in canonical order; constants (Clifford, v, a) have zero derivative
    // but still contribute their degree to the Leibniz sign.
    std::vector<std::pair<GradedExpr, GradedExpr>> factors;  // (factor, derivative)
    for (int i = 0; i < k.g.zpow; ++i)
      factors.emplace_back(GradedExpr::coord(Coord::Z, t), d.on_coord(Coord::Z).with_truncation(t));
    if (k.g.tm)
      factors.emplace_back(GradedExpr::coord(Coord::ThetaM, t),
                           d.on_coord(Coord::ThetaM).with_truncation(t));
    if (k.g.tp)
      factors.emplace_back(GradedExpr::coord(Coord::ThetaP, t),
                           d.on_coord(Coord::ThetaP).with_truncation(t));
    {
      TermKey ck;
      ck.g.cliff = k.g.cliff;
      ck.g.vpow = k.g.vpow;
      ck.g.apow = k.g.apow;
      factors.emplace_back(GradedExpr::term(ck, 1, t), GradedExpr(t));
    }
    for (const auto& j : k.g.gjets) factors.emplace_back(GradedExpr::jet(j, t), derive_jet(j, d, t));

    GradedExpr scalar_part = GradedExpr::term(TermKey{GradedKey{}, k.s}, c, t);
    Degree prefix_deg;
    GradedExpr prefix = GradedExpr::constant(1, t);
    for (size_t i = 0; i < factors.size(); ++i) {
      const auto& [f, df] = factors[i];
      if (!df.is_zero()) {
        GradedExpr suffix = GradedExpr::constant(1, t);
        for (size_t j = i + 1; j < factors.size(); ++j) suffix = suffix * factors[j].first;
        GradedExpr contrib = prefix * df * suffix * scalar_part;
        out += commutation_sign(d.degree, prefix_deg) == 1 ? contrib : -contrib;
      }
      prefix = prefix * f;
      prefix_deg = prefix_deg + f.degree();
    }
    GradedExpr ds = derive_scalar(k.s, d, t);
    if (!ds.is_zero()) {
      GradedExpr contrib = prefix * ds * c;
      out += commutation_sign(d.degree, prefix_deg) == 1 ? contrib : -contrib;
    }
  }
  return out;
}

BodySplit split_body(const GradedExpr& arg) {
  Degree deg;
  try {
    deg = arg.degree();
  } catch (const Error&) {
    throw Error(ErrorKind::NotScalarDegree, "inhomogeneous trig argument " + arg.str());
  }
  if (!deg.is_zero()) throw Error(ErrorKind::NotScalarDegree, "trig argument of degree " + deg.str());
  BodySplit out{{}, GradedExpr(arg.truncation())};
  for (const auto& [k, c] : arg.terms()) {
    if (k.g.is_one() && k.s.trig.kind == TrigKind::None && k.s.jets.size() == 1 &&
        k.s.jets[0].second == 1 && k.s.jets[0].first.is_body_symbol()) {
      out.body = arg_add(out.body, LinearArg{{k.s.jets[0].first.field, c}});
      continue;
    }
    bool nil = k.g.zpow > 0 || k.g.tm || k.g.tp || k.g.apow > 0;
    for (const auto& j : k.g.gjets) nil = nil || pairing(j.degree, j.degree) == 1;
    if (!nil)
      throw Error(ErrorKind::NonNilpotentRemainder, term_str(k, c, true) + " in " + arg.str());
    out.nilpotent.add_term(k, c);
  }
  return out;
}

GradedExpr trig_of(TrigKind kind, const GradedExpr& arg, const Rational& half) {
  const Truncation t = arg.truncation();
  if (kind == TrigKind::None) return GradedExpr::constant(1, t);
  BodySplit sp = split_body(arg);
  LinearArg body = arg_scale(sp.body, half);
  GradedExpr nil = sp.nilpotent * half;
  auto derivative = [&](int k) {
    // k-th derivative of kind at the body.
    int phase = (kind == TrigKind::Sin ? 0 : 1) + k;
    TrigKind tk = (phase % 2 == 0) ? TrigKind::Sin : TrigKind::Cos;
    int sign = (phase % 4 >= 2) ? -1 : 1;
    return GradedExpr::scalar(ScalarExpr::trig(tk, body), t) * Rational(sign);
  };
  GradedExpr out = derivative(0);
  GradedExpr power = GradedExpr::constant(1, t);
  Rational fact = 1;
  for (int k = 1;; ++k) {
    power = power * nil;
    if (power.is_zero()) break;
    if (k > 64) throw Error(ErrorKind::NonNilpotentRemainder, "Taylor series did not terminate");
    fact *= k;
    out += derivative(k) * power * (Rational(1) / fact);
  }
  return out;
}

GradedExpr pow(const GradedExpr& e, int k) {
  GradedExpr r = GradedExpr::constant(1, e.truncation());
  for (int i = 0; i < k; ++i) r = r * e;
  return r;
}

GradedExpr substitute(const GradedExpr& e, const Bindings& bindings) {
  for (const auto& [j, b] : bindings) {
    if (b.is_zero()) continue;
    if (b.degree() != j.degree)
      throw Error(ErrorKind::DegreeMismatch, j.str() + " := " + b.str());
    if (b.weight() != j.weight)
      throw Error(ErrorKind::WeightMismatch, j.str() + " := " + b.str());
  }
  const Truncation t = e.truncation();
  auto image = [&](const Jet& j) {
    auto it = bindings.find(j);
    return it == bindings.end() ? GradedExpr::jet(j, t) : it->second;
  };
  GradedExpr out(t);
  for (const auto& [k, c] : e.terms()) {
    TermKey head;
    head.g.zpow = k.g.zpow;
    head.g.tm = k.g.tm;
    head.g.tp = k.g.tp;
    head.g.cliff = k.g.cliff;
    head.g.vpow = k.g.vpow;
    head.g.apow = k.g.apow;
    GradedExpr r = GradedExpr::term(head, c, t);
    for (const auto& j : k.g.gjets) r = r * image(j);
    for (const auto& [j, ex] : k.s.jets) r = r * pow(image(j), ex);
    if (k.s.trig.kind != TrigKind::None) {
      bool bound = false;
      for (const auto& [sym, _] : k.s.trig.arg) bound = bound || bindings.count(make_jet(sym));
      if (bound) {
        GradedExpr a(t);
        for (const auto& [sym, q] : k.s.trig.arg) a += image(make_jet(sym)) * q;
        r = r * trig_of(k.s.trig.kind, a.with_truncation(t), 1);
      } else {
        r = r * GradedExpr::term(TermKey{GradedKey{}, ScalarKey{{}, k.s.trig}}, 1, t);
      }
    }
    out += r;
  }
  return out;
}

GradedExpr series_coefficient(const GradedExpr& e, int n) {
  const Truncation t = e.truncation();
  if (n < t.amin || n > t.amax)
    throw Error(ErrorKind::OutsideWindow,
                "a^" + std::to_string(n) + " outside [" + std::to_string(t.amin) + ", " +
                    std::to_string(t.amax) + "]");
  GradedExpr out(t);
  for (const auto& [k, c] : e.terms()) {
    if (k.g.apow != n) continue;
    TermKey k2 = k;
    k2.g.apow = 0;
    out.add_term(k2, c);
  }
  return out;
}

GradedExpr theta_component(const GradedExpr& e, bool tm, bool tp, int zpow) {
  GradedExpr out(e.truncation());
  for (const auto& [k, c] : e.terms()) {
    if (k.g.tm != tm || k.g.tp != tp || k.g.zpow != zpow) continue;
    TermKey k2 = k;
    k2.g.tm = k2.g.tp = false;
    k2.g.zpow = 0;
    out.add_term(k2, c);
  }
  return out;
}

std::vector<Jet> jets_of(const GradedExpr& e) {
  std::set<Jet> s;
  for (const auto& [k, c] : e.terms()) {
    for (const auto& j : k.g.gjets) s.insert(j);
    for (const auto& [j, ex] : k.s.jets) s.insert(j);
    for (const auto& [sym, q] : k.s.trig.arg) s.insert(make_jet(sym));
  }
  return {s.begin(), s.end()};
}

}  // namespace zzsg
