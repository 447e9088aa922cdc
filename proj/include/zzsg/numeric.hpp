#pragma once

// Floating-point companion: classical sine-Gordon dynamics, kinks, the body
// shadow of the Backlund relations and the fermion equations on a fixed
// background. Light-cone coordinates are x+- = x +- t, so
//   d/dx = d- + d+,  d/dt = d+ - d-,  d- d+ = (d_xx - d_tt) / 4,
// and the body equation reads X_xx - X_tt = sin X. Numerics run in the frame
// v+ = v- = 1.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "zzsg/backlund.hpp"

namespace zzsg {

/// c0 + c1 lambda+ + c2 lambda- + c3 alpha at v+- = 1.
class GradedNumber {
 public:
  static constexpr std::array<Cliff, 4> kBasis{Cliff::One, Cliff::LamP, Cliff::LamM, Cliff::Alpha};

  GradedNumber() = default;
  explicit GradedNumber(double scalar) : c_{scalar, 0, 0, 0} {}
  GradedNumber(double one, double lp, double lm, double al) : c_{one, lp, lm, al} {}
  static GradedNumber basis(Cliff b, double coeff = 1);

  double operator[](size_t i) const { return c_[i]; }
  double& operator[](size_t i) { return c_[i]; }
  double coeff(Cliff b) const;

  GradedNumber operator+(const GradedNumber& o) const;
  GradedNumber operator-(const GradedNumber& o) const;
  GradedNumber operator*(const GradedNumber& o) const;
  GradedNumber operator*(double s) const;
  bool operator==(const GradedNumber&) const = default;

  bool is_odd() const { return c_[0] == 0 && c_[3] == 0; }
  bool on_alpha_line() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0; }

  /// (sign, index) of b_i * b_j in the basis, from the symbolic rewrite table.
  static std::pair<int, int> table(int i, int j);

 private:
  std::array<double, 4> c_{0, 0, 0, 0};
};

enum class Boundary { Periodic, Kink };

struct FieldState {
  double L = 20;
  double h = 1.0 / 128;
  double t = 0;
  Boundary boundary = Boundary::Kink;
  std::vector<double> X, Xt;
  std::vector<GradedNumber> psi_p, psi_m;  // multiples of lambda+ and lambda- respectively

  size_t size() const { return X.size(); }
  double x(size_t j) const { return -L + static_cast<double>(j) * h; }
  bool fermion_free() const;

  /// Uniform grid on [-L, L] (both ends included), all fields zero.
  static FieldState zeros(double L, double h, Boundary b);
  void check() const;
};

struct GridConfig {
  double L = 20;
  double h = 1.0 / 128;
  double dt = 1.0 / 256;
};

double kink(double x, double t, double v, double x0);
/// Kink data (X and X_t) at time t.
FieldState kink_state(const GridConfig& g, double t, double v, double x0);

/// Stormer-Verlet leapfrog for X_tt = X_xx - sin X - 2 [alpha psi- psi+] sin(X/2).
FieldState solve_leapfrog(const FieldState& s0, double T, double dt);

double energy(const FieldState& s);

/// Max over interior points of |X_xx - X_tt - sin X| with X_tt supplied
/// (zero for a static profile). stencil_order is 2 or 4.
double classical_residual(const std::vector<double>& X, const std::vector<double>& Xtt, double h,
                          int stencil_order);

/// Spatial derivative with fourth-order central differences (second order at the ends).
std::vector<double> dx4(const std::vector<double>& f, double h);

// ---------------------------------------------------------------------------
// Body Backlund relations.

struct BodyBT {
  double a = 1;
  GradedExpr minus;  // d- X~ in terms of X~, X, X_{-}
  GradedExpr plus;   // d+ X~ in terms of X~, X, X_{+}
  GradedExpr compatibility;  // d+(d- X~) - d-(d+ X~) on-shell
  std::string target = "X~", seed = "X";

  /// Numeric value of an exported expression at one point.
  double eval(const GradedExpr& e, double Xt_, double X, double Xm, double Xp) const;
};

/// Wraps exported relations; a = 0 is rejected.
BodyBT make_body_bt(const BodyRelations& rel, double a);
BodyBT body_bt(const BTSystem& sys, double a);

struct BTAnchor {
  double x = 0;
  double value = 3.14159265358979323846;
};

struct BTResult {
  std::vector<double> times;
  std::vector<std::vector<double>> Xt;      // X~ per frame
  std::vector<std::vector<double>> Xt_dot;  // d/dt X~ per frame
  double max_mismatch = 0;                   // compatibility evaluated on the solution
};

/// Integrates X~ over the seed frames (uniform time spacing): the anchor value
/// is carried in t by d/dt X~ = R+ - R-, each frame in x by d/dx X~ = R- + R+
/// (RK4). Throws InconsistentSystem when the compatibility exceeds tol.
BTResult integrate_bt_body(const std::vector<FieldState>& seed_frames, const BodyBT& bt,
                           BTAnchor anchor = {}, double tol = 1e-6);

/// Classical residual of the middle frame of a BT result (needs >= 5 frames).
double bt_classical_residual(const BTResult& r, double h);

struct KinkFit {
  double v = 0;
  double x0 = 0;
  double max_error = 0;
  bool subluminal = true;
};

/// Fits kink(x, t, v, x0) to a profile and its time derivative.
KinkFit fit_kink(const std::vector<double>& X, const std::vector<double>& Xdot, double L, double h,
                 double t);

// ---------------------------------------------------------------------------
// Fermions.

struct FermionResult {
  FieldState state;
  double residual_plus = 0;   // d+ psi+ + (alpha/2) psi- cos(X/2)
  double residual_minus = 0;  // d- psi- + (alpha/2) psi+ cos(X/2)
};

/// Integrates psi+- on the fixed background from its initial data over [0, T]
/// along characteristics (time step h).
FermionResult integrate_fermions(const FieldState& background, double T);

// ---------------------------------------------------------------------------
// Output.

std::string to_csv(const FieldState& s, const std::vector<double>& residual, const std::string& config_json);

}  // namespace zzsg
