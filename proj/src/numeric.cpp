#include "zzsg/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "zzsg/model.hpp"

namespace zzsg {

// ---------------------------------------------------------------------------
// GradedNumber

std::pair<int, int> GradedNumber::table(int i, int j) {
  static const auto tab = [] {
    std::array<std::array<std::pair<int, int>, 4>, 4> t{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        CliffProduct p = cliff_mul(kBasis[a], kBasis[b]);
        int k = static_cast<int>(std::find(kBasis.begin(), kBasis.end(), p.elem) - kBasis.begin());
        t[a][b] = {p.sign, k};  // v+^k evaluates to 1
      }
    return t;
  }();
  return tab[i][j];
}

GradedNumber GradedNumber::basis(Cliff b, double coeff) {
  GradedNumber g;
  g.c_[std::find(kBasis.begin(), kBasis.end(), b) - kBasis.begin()] = coeff;
  return g;
}

double GradedNumber::coeff(Cliff b) const { return c_[std::find(kBasis.begin(), kBasis.end(), b) - kBasis.begin()]; }

GradedNumber GradedNumber::operator+(const GradedNumber& o) const {
  GradedNumber r;
  for (size_t i = 0; i < 4; ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

GradedNumber GradedNumber::operator-(const GradedNumber& o) const { return *this + o * -1.0; }

GradedNumber GradedNumber::operator*(double s) const {
  GradedNumber r;
  for (size_t i = 0; i < 4; ++i) r.c_[i] = c_[i] * s;
  return r;
}

GradedNumber GradedNumber::operator*(const GradedNumber& o) const {
  // Accumulate each product into its target slot; equal-and-opposite table
  // entries cancel as exact pairs before touching other components.
  GradedNumber r;
  for (int i = 0; i < 4; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; j < 4; ++j) {
      if (o.c_[j] == 0) continue;
      auto [s, k] = table(i, j);
      r.c_[k] += s * c_[i] * o.c_[j];
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Grid helpers

bool FieldState::fermion_free() const {
  for (size_t j = 0; j < psi_p.size(); ++j)
    if (!(psi_p[j] == GradedNumber{}) || !(psi_m[j] == GradedNumber{})) return false;
  return true;
}

FieldState FieldState::zeros(double L, double h, Boundary b) {
  if (!(L > 0) || !(h > 0)) throw Error(ErrorKind::InvalidArgument, "grid needs L > 0 and h > 0");
  FieldState s;
  s.L = L;
  s.h = h;
  s.boundary = b;
  auto n = static_cast<size_t>(std::llround(2 * L / h)) + 1;
  s.X.assign(n, 0);
  s.Xt.assign(n, 0);
  s.psi_p.assign(n, GradedNumber{});
  s.psi_m.assign(n, GradedNumber{});
  return s;
}

void FieldState::check() const {
  size_t n = X.size();
  if (n < 5 || Xt.size() != n || psi_p.size() != n || psi_m.size() != n)
    throw Error(ErrorKind::InvalidArgument, "field arrays must have equal length >= 5");
  for (size_t j = 0; j < n; ++j)
    if (psi_p[j][0] != 0 || psi_p[j][2] != 0 || psi_p[j][3] != 0 || psi_m[j][0] != 0 || psi_m[j][1] != 0 ||
        psi_m[j][3] != 0)
      throw Error(ErrorKind::InvalidArgument, "psi+ must lie on lambda+, psi- on lambda-");
}

namespace {

double pairwise_sum(const double* p, size_t n) {
  if (n <= 8) {
    double s = 0;
    for (size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  size_t m = n / 2;
  return pairwise_sum(p, m) + pairwise_sum(p + m, n - m);
}

void require_finite(const std::vector<double>& v, const char* what, double t) {
  for (double x : v)
    if (!std::isfinite(x))
      throw Error(ErrorKind::NonFiniteValue, std::string(what) + " at t = " + std::to_string(t));
}

// 2 pi times the winding of a periodic state.
double winding(const FieldState& s) {
  double w = (s.X.back() - s.X.front()) / (2 * std::numbers::pi);
  return 2 * std::numbers::pi * std::round(w);
}

}  // namespace

std::vector<double> dx4(const std::vector<double>& f, double h) {
  size_t n = f.size();
  std::vector<double> d(n, 0);
  if (n < 5) return d;
  for (size_t j = 2; j + 2 < n; ++j) d[j] = (f[j - 2] - 8 * f[j - 1] + 8 * f[j + 1] - f[j + 2]) / (12 * h);
  d[1] = (f[2] - f[0]) / (2 * h);
  d[n - 2] = (f[n - 1] - f[n - 3]) / (2 * h);
  d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
  d[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
  return d;
}

double classical_residual(const std::vector<double>& X, const std::vector<double>& Xtt, double h,
                          int stencil_order) {
  if (stencil_order != 2 && stencil_order != 4)
    throw Error(ErrorKind::InvalidArgument, "stencil order must be 2 or 4");
  double worst = 0;
  for (size_t j = 2; j + 2 < X.size(); ++j) {
    double xx = stencil_order == 2 ? (X[j - 1] - 2 * X[j] + X[j + 1]) / (h * h)
                                   : (-X[j - 2] + 16 * X[j - 1] - 30 * X[j] + 16 * X[j + 1] - X[j + 2]) /
                                         (12 * h * h);
    worst = std::max(worst, std::abs(xx - Xtt[j] - std::sin(X[j])));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Kinks

double kink(double x, double t, double v, double x0) {
  if (!(std::abs(v) < 1)) throw Error(ErrorKind::VelocityOutOfRange, "|v| must be < 1, got " + std::to_string(v));
  double g = 1 / std::sqrt(1 - v * v);
  return 4 * std::atan(std::exp(g * (x - v * t - x0)));
}

FieldState kink_state(const GridConfig& c, double t, double v, double x0) {
  FieldState s = FieldState::zeros(c.L, c.h, Boundary::Kink);
  double g = 1 / std::sqrt(1 - v * v);
  s.t = t;
  for (size_t j = 0; j < s.size(); ++j) {
    s.X[j] = kink(s.x(j), t, v, x0);
    double xi = g * (s.x(j) - v * t - x0);
    s.Xt[j] = -g * v * 2 / std::cosh(xi);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Fermion characteristic step

namespace {

// d+ psi+ = beta_p psi- cos(X/2) and d- psi- = beta_m psi+ cos(X/2) in
// lambda-coefficients, read off the algebra: alpha lambda- = k lambda+.
struct Coupling {
  double beta_p, beta_m;
};

Coupling coupling() {
  GradedNumber a = GradedNumber::basis(Cliff::Alpha);
  double kp = (a * GradedNumber::basis(Cliff::LamM)).coeff(Cliff::LamP);
  double km = (a * GradedNumber::basis(Cliff::LamP)).coeff(Cliff::LamM);
  return {-0.5 * kp, -0.5 * km};
}

// One step of length h along both families of characteristics (trapezoidal
// in the coupling). X0, X1 are the background at the old and new time.
void fermion_step(std::vector<double>& fp, std::vector<double>& fm, const std::vector<double>& X0,
                  const std::vector<double>& X1, double h, bool periodic) {
  const Coupling k = coupling();
  size_t n = fp.size();
  size_t N = periodic ? n - 1 : n;
  auto idx = [&](long j) -> size_t {
    if (periodic) return static_cast<size_t>((j % static_cast<long>(N) + static_cast<long>(N)) % static_cast<long>(N));
    return static_cast<size_t>(j);
  };
  std::vector<double> np(n, 0), nm(n, 0);
  for (size_t j = 0; j < N; ++j) {
    double cn = std::cos(X1[j] / 2);
    bool left_in = !periodic && j == 0, right_in = !periodic && j + 1 == N;
    double p = 0, q = 0;
    if (!left_in) {
      size_t l = idx(static_cast<long>(j) - 1);
      p = fp[l] + h * k.beta_p * std::cos(X0[l] / 2) * fm[l];
    }
    if (!right_in) {
      size_t r = idx(static_cast<long>(j) + 1);
      q = fm[r] - h * k.beta_m * std::cos(X0[r] / 2) * fp[r];
    }
    double u = left_in ? 0 : h * k.beta_p * cn;
    double w = right_in ? 0 : -h * k.beta_m * cn;
    np[j] = (p + u * q) / (1 - u * w);
    nm[j] = right_in ? 0 : q + w * np[j];
  }
  if (periodic) {
    np[n - 1] = np[0];
    nm[n - 1] = nm[0];
  }
  fp.swap(np);
  fm.swap(nm);
}

std::vector<double> lam_coeffs(const std::vector<GradedNumber>& v, Cliff b) {
  std::vector<double> out(v.size());
  for (size_t j = 0; j < v.size(); ++j) out[j] = v[j].coeff(b);
  return out;
}

void store_coeffs(std::vector<GradedNumber>& v, const std::vector<double>& c, Cliff b) {
  for (size_t j = 0; j < v.size(); ++j) v[j] = GradedNumber::basis(b, c[j]);
}

}  // namespace

// ---------------------------------------------------------------------------
// Leapfrog

FieldState solve_leapfrog(const FieldState& s0, double T, double dt) {
  s0.check();
  const double h = s0.h;
  if (!(dt > 0) || !(dt < h)) throw Error(ErrorKind::CFLViolation, "need 0 < dt < h");
  if (T < 0) throw Error(ErrorKind::InvalidArgument, "T must be >= 0");
  const bool fermions = !s0.fermion_free();
  if (fermions && std::abs(2 * dt - h) > 1e-12 * h)
    throw Error(ErrorKind::CFLViolation, "fermion staggering needs dt = h/2");
  const bool periodic = s0.boundary == Boundary::Periodic;
  const auto steps = static_cast<long>(std::llround(T / dt));
  FieldState s = s0;
  size_t n = s.size();
  const double wind = periodic ? winding(s) : 0;
  std::vector<double> fp = lam_coeffs(s.psi_p, Cliff::LamP), fm = lam_coeffs(s.psi_m, Cliff::LamM);
  const GradedNumber alpha = GradedNumber::basis(Cliff::Alpha);

  std::vector<double> A(n, 0);
  auto accel = [&](const std::vector<double>& X) {
    size_t N = periodic ? n - 1 : n;
    for (size_t j = 0; j < N; ++j) {
      double l, r;
      if (periodic) {
        l = j == 0 ? X[N - 1] - wind : X[j - 1];
        r = j + 1 == N ? X[0] + wind : X[j + 1];
      } else {
        if (j == 0 || j + 1 == n) {
          A[j] = 0;
          continue;
        }
        l = X[j - 1];
        r = X[j + 1];
      }
      double src = 0;
      if (fermions) {
        GradedNumber bil = GradedNumber::basis(Cliff::LamM, fm[j]) * GradedNumber::basis(Cliff::LamP, fp[j]);
        if (!bil.on_alpha_line()) throw Error(ErrorKind::InvalidArgument, "fermion bilinear left the alpha line");
        src = (alpha * bil)[0];
      }
      A[j] = (l - 2 * X[j] + r) / (h * h) - std::sin(X[j]) - 2 * src * std::sin(X[j] / 2);
    }
    if (periodic) A[n - 1] = A[0];
  };

  std::vector<double> X_prev;
  accel(s.X);
  for (long k = 0; k < steps; ++k) {
    if (fermions && k % 2 == 0) X_prev = s.X;
    for (size_t j = 0; j < n; ++j) s.Xt[j] += 0.5 * dt * A[j];
    for (size_t j = 0; j < n; ++j) s.X[j] += dt * s.Xt[j];
    if (periodic) s.X[n - 1] = s.X[0] + wind;
    accel(s.X);
    for (size_t j = 0; j < n; ++j) s.Xt[j] += 0.5 * dt * A[j];
    s.t = s0.t + static_cast<double>(k + 1) * dt;
    if (fermions && k % 2 == 1) fermion_step(fp, fm, X_prev, s.X, h, periodic);
    require_finite(s.X, "X", s.t);
  }
  if (fermions) {
    require_finite(fp, "psi+", s.t);
    require_finite(fm, "psi-", s.t);
    store_coeffs(s.psi_p, fp, Cliff::LamP);
    store_coeffs(s.psi_m, fm, Cliff::LamM);
  }
  return s;
}

double energy(const FieldState& s) {
  std::vector<double> Xx = dx4(s.X, s.h);
  std::vector<double> e(s.size());
  for (size_t j = 0; j < s.size(); ++j)
    e[j] = 0.5 * s.Xt[j] * s.Xt[j] + 0.5 * Xx[j] * Xx[j] + (1 - std::cos(s.X[j]));
  e.front() *= 0.5;
  e.back() *= 0.5;
  return s.h * pairwise_sum(e.data(), e.size());
}

}  // namespace zzsg

namespace zzsg {

// ---------------------------------------------------------------------------
// Body Backlund relations

double BodyBT::eval(const GradedExpr& e, double Xt_, double Xs, double Xm, double Xp) const {
  auto value = [&](const Jet& j) -> double {
    if (j.field == target && !j.m && !j.n) return Xt_;
    if (j.field == seed) {
      if (!j.m && !j.n) return Xs;
      if (j.m == 1 && !j.n) return Xm;
      if (!j.m && j.n == 1) return Xp;
    }
    if (j.field == "pi") return std::numbers::pi;
    throw Error(ErrorKind::UnknownSymbol, "no numeric value for " + j.str());
  };
  double sum = 0;
  for (const auto& [k, c] : e.terms()) {
    if (k.g.cliff != Cliff::One || k.g.tm || k.g.tp || k.g.zpow || !k.g.gjets.empty())
      throw Error(ErrorKind::UnresolvedGenerator, "term is not a body term");
    double v = c.convert_to<double>() * std::pow(a, k.g.apow);
    for (const auto& [j, p] : k.s.jets) v *= std::pow(value(j), p);
    if (k.s.trig.kind != TrigKind::None) {
      double arg = 0;
      for (const auto& [sym, q] : k.s.trig.arg)
        arg += q.convert_to<double>() * (sym == "pi" ? std::numbers::pi : value(make_jet(sym)));
      v *= k.s.trig.kind == TrigKind::Sin ? std::sin(arg) : std::cos(arg);
    }
    sum += v;
  }
  return sum;
}

BodyBT make_body_bt(const BodyRelations& rel, double a) {
  if (!(a != 0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, "BT parameter a must be finite and nonzero");
  if (rel.relations.size() != 2) throw Error(ErrorKind::InvalidArgument, "expected relations for d- and d+");
  BodyBT bt;
  bt.a = a;
  const Jet& jm = rel.relations[0].first;
  bt.target = jm.field;
  bt.minus = rel.relations[0].second;
  bt.plus = rel.relations[1].second;
  for (const Jet& j : jets_of(bt.minus))
    if (j.field != bt.target && j.field != "pi") bt.seed = j.field;
  // Cross derivatives with the relations and the classical seed equation substituted.
  Bindings b{{make_jet(bt.target, 1, 0), bt.minus},
             {make_jet(bt.target, 0, 1), bt.plus},
             {make_jet(bt.seed, 1, 1),
              GradedExpr::scalar(ScalarExpr::trig(TrigKind::Sin, {{bt.seed, 1}})) * Rational(1, 4)}};
  bt.compatibility = substitute(apply(deriv_Pp(), bt.minus) - apply(deriv_Pm(), bt.plus), b);
  return bt;
}

BodyBT body_bt(const BTSystem& sys, double a) { return make_body_bt(export_body_system(sys), a); }

namespace {

// Cubic Lagrange interpolation of samples f at fractional index s.
double lagrange4(const std::vector<double>& f, double s) {
  long n = static_cast<long>(f.size());
  long i0 = std::clamp(static_cast<long>(std::floor(s)) - 1, 0L, n - 4);
  double r = 0;
  for (long i = i0; i < i0 + 4; ++i) {
    double w = 1;
    for (long k = i0; k < i0 + 4; ++k)
      if (k != i) w *= (s - static_cast<double>(k)) / static_cast<double>(i - k);
    r += w * f[static_cast<size_t>(i)];
  }
  return r;
}

struct SeedJets {
  std::vector<double> X, Xm, Xp;
};

SeedJets seed_jets(const FieldState& s) {
  SeedJets j{s.X, {}, {}};
  std::vector<double> Xx = dx4(s.X, s.h);
  j.Xm.resize(s.size());
  j.Xp.resize(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    j.Xm[i] = 0.5 * (Xx[i] - s.Xt[i]);
    j.Xp[i] = 0.5 * (Xx[i] + s.Xt[i]);
  }
  return j;
}

}  // namespace

BTResult integrate_bt_body(const std::vector<FieldState>& frames, const BodyBT& bt, BTAnchor anchor, double tol) {
  if (frames.empty()) throw Error(ErrorKind::InvalidArgument, "no seed frames");
  for (const auto& f : frames) {
    f.check();
    if (f.size() != frames[0].size() || f.h != frames[0].h)
      throw Error(ErrorKind::InvalidArgument, "seed frames must share one grid");
  }
  const double h = frames[0].h;
  const size_t n = frames[0].size();
  const double delta = frames.size() > 1 ? frames[1].t - frames[0].t : 0;
  for (size_t k = 1; k < frames.size(); ++k)
    if (std::abs(frames[k].t - frames[k - 1].t - delta) > 1e-9 * std::max(1.0, std::abs(delta)))
      throw Error(ErrorKind::InvalidArgument, "seed frames must be equally spaced in time");
  const double sa = (anchor.x + frames[0].L) / h;
  if (sa < 0 || sa > static_cast<double>(n - 1)) throw Error(ErrorKind::InvalidArgument, "anchor outside the grid");

  std::vector<SeedJets> jets;
  for (const auto& f : frames) jets.push_back(seed_jets(f));
  auto R = [&](const GradedExpr& rel, double xt, const SeedJets& s, double pos) {
    return bt.eval(rel, xt, lagrange4(s.X, pos), lagrange4(s.Xm, pos), lagrange4(s.Xp, pos));
  };

  // Anchor value in time: RK4 with the seed interpolated between frames.
  std::vector<double> anchor_vals(frames.size(), anchor.value);
  if (frames.size() > 1) {
    std::vector<double> ax(frames.size()), am(frames.size()), ap(frames.size());
    for (size_t k = 0; k < frames.size(); ++k) {
      ax[k] = lagrange4(jets[k].X, sa);
      am[k] = lagrange4(jets[k].Xm, sa);
      ap[k] = lagrange4(jets[k].Xp, sa);
    }
    auto F = [&](double xt, double kpos) {
      double X = frames.size() >= 4 ? lagrange4(ax, kpos) : ax[static_cast<size_t>(std::lround(kpos))];
      double m = frames.size() >= 4 ? lagrange4(am, kpos) : am[static_cast<size_t>(std::lround(kpos))];
      double p = frames.size() >= 4 ? lagrange4(ap, kpos) : ap[static_cast<size_t>(std::lround(kpos))];
      return bt.eval(bt.plus, xt, X, m, p) - bt.eval(bt.minus, xt, X, m, p);
    };
    for (size_t k = 0; k + 1 < frames.size(); ++k) {
      double y = anchor_vals[k], kp = static_cast<double>(k);
      double k1 = F(y, kp), k2 = F(y + 0.5 * delta * k1, kp + 0.5), k3 = F(y + 0.5 * delta * k2, kp + 0.5),
             k4 = F(y + delta * k3, kp + 1);
      anchor_vals[k + 1] = y + delta / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
  }

  BTResult out;
  for (size_t k = 0; k < frames.size(); ++k) {
    const SeedJets& s = jets[k];
    auto G = [&](double xt, double pos) { return R(bt.minus, xt, s, pos) + R(bt.plus, xt, s, pos); };
    std::vector<double> Y(n, 0);
    // Step from the anchor to the nearest grid point, then outward.
    auto j0 = static_cast<size_t>(std::lround(sa));
    auto rk4 = [&](double y, double pos, double step) {
      double ds = step / h;
      double k1 = G(y, pos), k2 = G(y + 0.5 * step * k1, pos + 0.5 * ds), k3 = G(y + 0.5 * step * k2, pos + 0.5 * ds),
             k4 = G(y + step * k3, pos + ds);
      return y + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    };
    Y[j0] = rk4(anchor_vals[k], sa, (static_cast<double>(j0) - sa) * h);
    for (size_t j = j0; j + 1 < n; ++j) Y[j + 1] = rk4(Y[j], static_cast<double>(j), h);
    for (size_t j = j0; j > 0; --j) Y[j - 1] = rk4(Y[j], static_cast<double>(j), -h);
    require_finite(Y, "X~", frames[k].t);

    std::vector<double> Yt(n);
    for (size_t j = 0; j < n; ++j) {
      double p = static_cast<double>(j);
      Yt[j] = R(bt.plus, Y[j], s, p) - R(bt.minus, Y[j], s, p);
      out.max_mismatch = std::max(out.max_mismatch, std::abs(R(bt.compatibility, Y[j], s, p)));
    }
    out.times.push_back(frames[k].t);
    out.Xt.push_back(std::move(Y));
    out.Xt_dot.push_back(std::move(Yt));
  }
  if (out.max_mismatch > tol)
    throw Error(ErrorKind::InconsistentSystem,
                "cross-derivative mismatch " + std::to_string(out.max_mismatch) + " exceeds " + std::to_string(tol));
  return out;
}

double bt_classical_residual(const BTResult& r, double h) {
  if (r.times.size() < 5) throw Error(ErrorKind::InvalidArgument, "need at least 5 frames");
  size_t m = r.times.size() / 2;
  double d = r.times[1] - r.times[0];
  const auto& V = r.Xt_dot;
  std::vector<double> Xtt(r.Xt[m].size());
  for (size_t j = 0; j < Xtt.size(); ++j)
    Xtt[j] = (-V[m + 2][j] + 8 * V[m + 1][j] - 8 * V[m - 1][j] + V[m - 2][j]) / (12 * d);
  return classical_residual(r.Xt[m], Xtt, h, 4);
}

KinkFit fit_kink(const std::vector<double>& X, const std::vector<double>& Xdot, double L, double h, double t) {
  KinkFit f;
  f.max_error = std::numeric_limits<double>::infinity();
  std::vector<double> Xx = dx4(X, h);
  double num = 0, den = 0;
  for (size_t j = 0; j < X.size(); ++j) {
    num += Xdot[j] * Xx[j];
    den += Xx[j] * Xx[j];
  }
  if (den < 1e-12) {
    f.subluminal = false;
    return f;
  }
  f.v = -num / den;
  if (!(std::abs(f.v) < 1)) {
    f.subluminal = false;
    return f;
  }
  const double pi = std::numbers::pi;
  size_t j = 0;
  while (j + 1 < X.size() && !(X[j] <= pi && X[j + 1] > pi)) ++j;
  if (j + 1 == X.size()) return f;
  double xc = -L + (static_cast<double>(j) + (pi - X[j]) / (X[j + 1] - X[j])) * h;
  f.x0 = xc - f.v * t;
  double g = 1 / std::sqrt(1 - f.v * f.v), err = 0;
  for (size_t i = 0; i < X.size(); ++i) {
    double x = -L + static_cast<double>(i) * h;
    double xi = g * (x - f.v * t - f.x0);
    err = std::max({err, std::abs(X[i] - kink(x, t, f.v, f.x0)), std::abs(Xdot[i] + g * f.v * 2 / std::cosh(xi))});
  }
  f.max_error = err;
  return f;
}

// ---------------------------------------------------------------------------
// Fermions on a fixed background

FermionResult integrate_fermions(const FieldState& bg, double T) {
  bg.check();
  const double h = bg.h;
  const bool periodic = bg.boundary == Boundary::Periodic;
  const auto steps = static_cast<long>(std::llround(T / h));
  std::vector<double> fp = lam_coeffs(bg.psi_p, Cliff::LamP), fm = lam_coeffs(bg.psi_m, Cliff::LamM);
  std::vector<double> pp, pm, qp, qm;  // two previous levels for the residual
  for (long k = 0; k < steps; ++k) {
    qp = pp;
    qm = pm;
    pp = fp;
    pm = fm;
    fermion_step(fp, fm, bg.X, bg.X, h, periodic);
    require_finite(fp, "psi+", bg.t + static_cast<double>(k + 1) * h);
    require_finite(fm, "psi-", bg.t + static_cast<double>(k + 1) * h);
  }
  FermionResult out;
  out.state = bg;
  out.state.t = bg.t + static_cast<double>(steps) * h;
  store_coeffs(out.state.psi_p, fp, Cliff::LamP);
  store_coeffs(out.state.psi_m, fm, Cliff::LamM);
  if (steps >= 2) {
    // Centred differences at the previous level, evaluated in the algebra.
    const GradedNumber alpha = GradedNumber::basis(Cliff::Alpha);
    size_t n = fp.size();
    for (size_t j = 1; j + 1 < n; ++j) {
      double cs = std::cos(bg.X[j] / 2);
      double dt_p = (fp[j] - qp[j]) / (2 * h), dx_p = (pp[j + 1] - pp[j - 1]) / (2 * h);
      double dt_m = (fm[j] - qm[j]) / (2 * h), dx_m = (pm[j + 1] - pm[j - 1]) / (2 * h);
      GradedNumber rp = GradedNumber::basis(Cliff::LamP, 0.5 * (dx_p + dt_p)) +
                        alpha * GradedNumber::basis(Cliff::LamM, pm[j]) * (0.5 * cs);
      GradedNumber rm = GradedNumber::basis(Cliff::LamM, 0.5 * (dx_m - dt_m)) +
                        alpha * GradedNumber::basis(Cliff::LamP, pp[j]) * (0.5 * cs);
      double np = 0, nm = 0;
      for (size_t i = 0; i < 4; ++i) {
        np = std::max(np, std::abs(rp[i]));
        nm = std::max(nm, std::abs(rm[i]));
      }
      out.residual_plus = std::max(out.residual_plus, np);
      out.residual_minus = std::max(out.residual_minus, nm);
    }
  }
  return out;
}

std::string to_csv(const FieldState& s, const std::vector<double>& residual, const std::string& config_json) {
  std::ostringstream o;
  o.precision(12);
  o << "# " << config_json << "\n";
  o << "t,x,X,psi_plus_lambda_plus_coeff,psi_minus_lambda_minus_coeff,residual\n";
  for (size_t j = 0; j < s.size(); ++j)
    o << s.t << "," << s.x(j) << "," << s.X[j] << "," << s.psi_p[j].coeff(Cliff::LamP) << ","
      << s.psi_m[j].coeff(Cliff::LamM) << "," << (j < residual.size() ? residual[j] : 0.0) << "\n";
  return o.str();
}

}  // namespace zzsg
