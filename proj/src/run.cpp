#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

#include "zzsg/cli.hpp"

namespace zzsg {

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::vector<std::string> kNumericChecks{"kink", "bt-numeric", "fermions"};

bool is_numeric(const std::string& name) {
  return std::find(kNumericChecks.begin(), kNumericChecks.end(), name) != kNumericChecks.end();
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

GradedExpr P(const std::string& s, int nz = 0) {
  ParseOptions o;
  o.trunc.nz = nz;
  return parse_expr(s, o);
}

Report group(std::string name) {
  Report r;
  r.check = std::move(name);
  return r;
}

// Numeric pass/fail line: value < tol.
Report bound(std::string name, double value, double tol) {
  Report r = group(std::move(name));
  r.status = std::isfinite(value) && value < tol ? Status::Pass : Status::Fail;
  r.details = "value " + fmt(value) + ", bound " + fmt(tol);
  return r;
}

Report within(std::string name, double value, double lo, double hi) {
  Report r = group(std::move(name));
  r.status = value >= lo && value <= hi ? Status::Pass : Status::Fail;
  r.details = "value " + fmt(value) + ", range [" + fmt(lo) + ", " + fmt(hi) + "]";
  return r;
}

Report note(std::string name, std::string details) {
  Report r = group(std::move(name));
  r.status = Status::Info;
  r.details = std::move(details);
  return r;
}

Report tagged(Report r, const BTSystem& s) {
  r.check += s.orientation == Orientation::Minus ? " (minus)" : " (plus)";
  return r;
}

BTSystem configured(BTSystem s, const RunConfig& cfg) {
  s.sabotage = cfg.sabotage;
  return s;
}

// --- symbolic checks --------------------------------------------------------

Report check_algebra() { return verify_superalgebra(); }

Report check_eom() {
  Report r = group("derive-eom");
  GradedExpr el = euler_lagrange(sine_gordon_lagrangian());
  r.add(Report::from_residual("Euler-Lagrange = D-D+Phi + D+D-Phi + alpha sin(Phi/2)",
                              el - P("D- D+ Phi + D+ D- Phi + alpha*sin(1/2*Phi)"), "engine: " + el.str()));
  r.add(Report::from_residual("Euler-Lagrange = sg_residual(Phi)", el - sg_residual(superfield_atom("Phi"))));
  return r;
}

Report check_components() {
  Report r = group("components");
  auto eqs = component_equations(true);
  const std::map<std::string, std::string> expected{
      {"X", "X_{-+} - 1/4*sin(X) - 1/2*alpha*psi-*psi+*sin(1/2*X)"},
      {"psi+", "psi+_{+} + 1/2*alpha*psi-*cos(1/2*X)"},
      {"psi-", "psi-_{-} + 1/2*alpha*psi+*cos(1/2*X)"},
  };
  std::map<std::string, GradedExpr> got;
  for (const auto& e : eqs) got[e.leading.field] = e.residual;
  for (const auto& [field, text] : expected) {
    auto it = got.find(field);
    if (it == got.end()) {
      Report m = group("equation for " + field);
      m.status = Status::Fail;
      m.details = "missing";
      r.add(m);
      continue;
    }
    r.add(Report::from_residual("equation for " + field, it->second - P(text), "engine: " + it->second.str()));
  }
  for (const auto& e : component_equations(false))
    if (e.sector == "1")
      r.add(Report::from_residual("auxiliary 2F = -alpha sin(X/2)", e.residual - P("F + 1/2*alpha*sin(1/2*X)")));
  if (got.count("X")) {
    Bindings zero{{make_jet("psi+"), GradedExpr{}}, {make_jet("psi-"), GradedExpr{}}};
    r.add(Report::from_residual("psi = 0 gives X_{-+} - 1/4 sin X",
                                substitute(got["X"], zero) - P("X_{-+} - 1/4*sin(X)")));
  }
  return r;
}

Report check_bt(const RunConfig& cfg) {
  Report r = group("verify-bt");
  r.add(verify_auto_bt(configured(minus_system(), cfg)));
  r.add(verify_auto_bt(configured(plus_system(), cfg)));
  return r;
}

Report series_report(const BTSystem& sys, int N) {
  auto t0 = std::chrono::steady_clock::now();
  Report r = group(sys.orientation == Orientation::Minus ? "series (minus)" : "series (plus)");
  auto c = expand_series(sys, std::max(N, 2));
  if (sys.orientation == Orientation::Minus) {
    r.add(Report::from_residual("Phi~_0 = Phi", c[0] - P("Phi")));
    r.add(Report::from_residual("Phi~_1 = -4 lambda+^2 lambda- D+Phi",
                                c[1] - P("-4*lambda+*lambda+*lambda-*D+ Phi")));
    r.add(Report::from_residual("Phi~_2 = 8 lambda+^2 D+D+Phi", c[2] - P("8*lambda+*lambda+*D+ D+ Phi")));
  } else {
    r.add(Report::from_residual("Phi~_0 = Phi", c[0] - P("Phi")));
    r.add(Report::from_residual("Phi~_1 = -4 eta+^2 eta- D-Phi", c[1] - P("-4*eta+*eta+*eta-*D- Phi")));
    r.add(Report::from_residual("Phi~_2 = 8 eta+^2 D-D-Phi", c[2] - P("8*eta+*eta+*D- D- Phi")));
  }
  for (int n = 1; n <= N; ++n) {
    std::string w;
    try {
      w = "degree " + c[n].degree().str() + ", weight " + weight_of(c[n]).str();
    } catch (const Error& e) {
      w = std::string("inhomogeneous: ") + e.what();
    }
    r.children.push_back(Report::info("Phi~_" + std::to_string(n), c[n], w));
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

Report check_series(const RunConfig& cfg) {
  Report r = group("expand-bt");
  r.add(series_report(configured(minus_system(), cfg), cfg.order));
  r.add(series_report(configured(plus_system(), cfg), cfg.order));
  return r;
}

Report check_closed_form(const RunConfig& cfg) {
  Report r = group("closed-form");
  r.add(tagged(verify_closed_form(configured(minus_system(), cfg), cfg.order), minus_system()));
  r.add(tagged(verify_closed_form(configured(plus_system(), cfg), cfg.order), plus_system()));
  return r;
}

Report check_redundancy(const RunConfig& cfg) {
  Report r = group("redundancy");
  r.add(tagged(verify_redundancy(configured(minus_system(), cfg), cfg.order), minus_system()));
  r.add(tagged(verify_redundancy(configured(plus_system(), cfg), cfg.order), plus_system()));
  return r;
}

Report check_currents(const RunConfig& cfg) {
  Report r = group("currents");
  r.add(verify_current_conservation(configured(minus_system(), cfg)));
  r.add(verify_current_conservation(configured(plus_system(), cfg)));
  return r;
}

Report check_audit(const RunConfig& cfg) {
  Report r = group("conservation-audit");
  r.add(conservation_audit(configured(minus_system(), cfg), cfg.audit_order));
  r.add(conservation_audit(configured(plus_system(), cfg), cfg.audit_order));
  for (auto& c : r.children)
    if (c.details.empty()) c.details = "informational, compared against golden files";
  if (r.status == Status::Pass) r.status = Status::Info;
  r.details = "informational, compared against golden files";
  return r;
}

// --- numeric checks ---------------------------------------------------------

std::vector<double> static_residual(const FieldState& s) {
  std::vector<double> r(s.size(), 0.0);
  const double h2 = s.h * s.h;
  for (size_t j = 2; j + 2 < s.size(); ++j) {
    double xx = (-s.X[j - 2] + 16 * s.X[j - 1] - 30 * s.X[j] + 16 * s.X[j + 1] - s.X[j + 2]) / (12 * h2);
    r[j] = xx - std::sin(s.X[j]);
  }
  return r;
}

std::string grid_json(const RunConfig& cfg, const std::string& check) {
  nlohmann::json j{{"check", check}, {"L", cfg.grid.L}, {"h", cfg.grid.h}, {"dt", cfg.grid.dt}};
  return j.dump();
}

void write_csv(const RunConfig& cfg, const std::string& name, const std::string& body) {
  if (cfg.csv_dir.empty()) return;
  std::filesystem::create_directories(cfg.csv_dir);
  std::ofstream f(std::filesystem::path(cfg.csv_dir) / (name + ".csv"));
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write CSV in " + cfg.csv_dir);
  f << body;
}

Report check_kink(const RunConfig& cfg) {
  Report r = group("kink");
  const double hk = 1.0 / 512;
  FieldState fine = kink_state({cfg.grid.L, hk, hk / 2}, 0, 0, 0);
  std::vector<double> zero(fine.size(), 0.0);
  r.add(bound("static kink residual, h = 2^-9, 5-point stencil", classical_residual(fine.X, zero, hk, 4), 1e-8));
  r.children.push_back(note("static kink residual, h = 2^-9, 3-point stencil",
                            fmt(classical_residual(fine.X, zero, hk, 2))));

  const GridConfig& g = cfg.grid;
  r.add(bound("|E(kink) - 8|", std::abs(energy(kink_state(g, 0, 0, 0)) - 8), 1e-6));
  const double v = 0.6;
  r.add(bound("|E(boosted kink, v = 0.6) - 8 gamma|",
              std::abs(energy(kink_state(g, 0, v, 0)) - 8 / std::sqrt(1 - v * v)), 1e-5));

  double err[2];
  int i = 0;
  for (double h : {2 * g.h, g.h}) {
    auto s = solve_leapfrog(kink_state({g.L, h, h / 2}, 0, 0.5, 0), 10, h / 2);
    double e = 0;
    for (size_t j = 0; j < s.size(); ++j) e = std::max(e, std::abs(s.X[j] - kink(s.x(j), s.t, 0.5, 0)));
    err[i++] = e;
  }
  r.add(within("leapfrog refinement factor (moving kink, T = 10)", err[0] / err[1], 3.5, 4.5));
  r.children.push_back(note("leapfrog errors", fmt(err[0]) + " at h = " + fmt(2 * g.h) + ", " + fmt(err[1]) +
                                                   " at h = " + fmt(g.h)));

  FieldState s0 = kink_state(g, 0, 0, 0);
  FieldState s1 = solve_leapfrog(s0, 10, g.dt);
  r.children.push_back(note("relative energy drift of the static kink, T = 10",
                            fmt(std::abs(energy(s1) - energy(s0)) / energy(s0))));
  write_csv(cfg, "kink", to_csv(s0, static_residual(s0), grid_json(cfg, "kink")));
  return r;
}

std::vector<FieldState> vacuum_frames(const GridConfig& g) {
  std::vector<FieldState> f;
  for (int n = -2; n <= 2; ++n) {
    auto s = FieldState::zeros(g.L, g.h, Boundary::Kink);
    s.t = n * g.dt;
    f.push_back(s);
  }
  return f;
}

Report check_bt_numeric(const RunConfig& cfg) {
  Report r = group("bt-numeric");
  BodyBT bt = body_bt(configured(minus_system(), cfg), cfg.bt_a);
  r.children.push_back(Report::info("exported d-X~", bt.minus));
  r.children.push_back(Report::info("exported d+X~", bt.plus));
  r.children.push_back(Report::info("cross-derivative compatibility on-shell", bt.compatibility));
  BTResult res;
  try {
    res = integrate_bt_body(vacuum_frames(cfg.grid), bt);
  } catch (const Error& e) {
    Report f = group("integrate from the vacuum seed");
    f.status = Status::Fail;
    f.details = e.what();
    r.add(f);
    return r;
  }
  const size_t m = res.Xt.size() / 2;
  KinkFit fit = fit_kink(res.Xt[m], res.Xt_dot[m], cfg.grid.L, cfg.grid.h, res.times[m]);
  Report kinkish = group("profile is a subluminal kink");
  kinkish.status = fit.subluminal ? Status::Pass : Status::Fail;
  kinkish.details = "fitted v " + fmt(fit.v) + ", x0 " + fmt(fit.x0);
  r.add(kinkish);
  r.add(bound("max |X~ - kink| after fit", fit.max_error, 1e-6));
  r.add(bound("classical residual of X~", bt_classical_residual(res, cfg.grid.h), 1e-6));
  FieldState out = FieldState::zeros(cfg.grid.L, cfg.grid.h, Boundary::Kink);
  out.t = res.times[m];
  out.X = res.Xt[m];
  out.Xt = res.Xt_dot[m];
  write_csv(cfg, "bt-numeric", to_csv(out, static_residual(out), grid_json(cfg, "bt-numeric")));
  return r;
}

Report check_fermions(const RunConfig& cfg) {
  Report r = group("fermions");
  const double h = std::min(cfg.grid.h, 1.0 / 512);
  FieldState bg = FieldState::zeros(cfg.grid.L, h, Boundary::Periodic);
  const double k = kPi / cfg.grid.L, w = std::sqrt(k * k + 1);
  for (size_t j = 0; j < bg.size(); ++j) {
    bg.psi_p[j] = GradedNumber::basis(Cliff::LamP, std::cos(k * bg.x(j)));
    bg.psi_m[j] = GradedNumber::basis(Cliff::LamM, (w - k) * std::sin(k * bg.x(j)));
  }
  FermionResult pw = integrate_fermions(bg, 1);
  double e = 0;
  for (size_t j = 0; j < bg.size(); ++j) {
    double th = k * bg.x(j) - w * pw.state.t;
    e = std::max({e, std::abs(pw.state.psi_p[j].coeff(Cliff::LamP) - std::cos(th)),
                  std::abs(pw.state.psi_m[j].coeff(Cliff::LamM) - (w - k) * std::sin(th))});
  }
  r.add(bound("plane wave on the zero background vs characteristics, T = 1", e, 1e-6));

  FieldState kb = kink_state(cfg.grid, 0, 0, 0);
  for (size_t j = 0; j < kb.size(); ++j) {
    kb.psi_p[j] = GradedNumber::basis(Cliff::LamP, std::exp(-std::pow(kb.x(j) + 3, 2) / 4));
    kb.psi_m[j] = GradedNumber::basis(Cliff::LamM, std::exp(-std::pow(kb.x(j) - 3, 2) / 4));
  }
  FermionResult kr = integrate_fermions(kb, 2);
  r.children.push_back(note("residual on the static kink, T = 2",
                            "plus " + fmt(kr.residual_plus) + ", minus " + fmt(kr.residual_minus)));
  std::vector<double> res(kr.state.size(), std::max(kr.residual_plus, kr.residual_minus));
  write_csv(cfg, "fermions", to_csv(kr.state, res, grid_json(cfg, "fermions")));
  return r;
}

nlohmann::json terms_json(const GradedExpr& e) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [k, c] : e.terms()) a.push_back(term_str(k, c, true));
  return a;
}

nlohmann::json body_json(const Report& r, bool timing) {
  nlohmann::json children = nlohmann::json::array();
  for (const auto& c : r.children) children.push_back(body_json(c, timing));
  nlohmann::json j{{"check", r.check},
                   {"status", to_string(r.status)},
                   {"residual_terms", terms_json(r.residual)},
                   {"details", {{"summary", r.details}, {"children", children}}}};
  if (timing) j["timing"] = {{"elapsed_ms", r.elapsed_ms}};
  return j;
}

// Golden comparison; returns false on mismatch.
bool golden(const RunConfig& cfg, const std::string& name, const std::string& text, std::ostream& err) {
  namespace fs = std::filesystem;
  fs::path path = fs::path(cfg.golden_dir) / (name + ".txt");
  if (!cfg.update_golden && fs::exists(path)) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    if (ss.str() == text) return true;
    err << Error(ErrorKind::GoldenMismatch, name + " differs from " + path.string()).what() << "\n";
    return false;
  }
  fs::create_directories(cfg.golden_dir);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write golden file " + path.string());
  f << text;
  return true;
}

}  // namespace

const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> names{
      "verify-algebra", "derive-eom", "components", "verify-bt",  "expand-bt", "closed-form",
      "redundancy",     "currents",   "conservation-audit",       "kink",      "bt-numeric", "fermions"};
  return names;
}

void RunConfig::validate() const {
  const auto& known = all_checks();
  for (const auto& c : checks)
    if (std::find(known.begin(), known.end(), c) == known.end())
      throw Error(ErrorKind::ConfigError, "unknown check '" + c + "'");
  Truncation t;
  if (order < 0 || order > t.amax) throw Error(ErrorKind::ConfigError, "order must lie in [0, " + std::to_string(t.amax) + "]");
  if (audit_order < 0 || audit_order > t.amax)
    throw Error(ErrorKind::ConfigError, "audit order must lie in [0, " + std::to_string(t.amax) + "]");
  if (nz < 0 || nz > 1) throw Error(ErrorKind::ConfigError, "z-order must be 0 or 1");
  if (!(grid.L > 0) || !(grid.h > 0) || !(grid.dt > 0)) throw Error(ErrorKind::ConfigError, "grid parameters must be positive");
  if (grid.h > grid.L) throw Error(ErrorKind::ConfigError, "grid spacing exceeds the half-width");
  if (grid.dt >= grid.h) throw Error(ErrorKind::ConfigError, "CFL: dt must be below h");
  if (!std::isfinite(bt_a) || bt_a == 0) throw Error(ErrorKind::ConfigError, "BT parameter a must be finite and nonzero");
  if (format != "text" && format != "json") throw Error(ErrorKind::ConfigError, "format must be text or json");
  if (update_golden && golden_dir.empty()) throw Error(ErrorKind::ConfigError, "--update-golden needs --golden");
  if (workers < 1) throw Error(ErrorKind::ConfigError, "workers must be positive");
}

Report run_check(const std::string& name, const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  Report r;
  if (name == "verify-algebra") r = check_algebra();
  else if (name == "derive-eom") r = check_eom();
  else if (name == "components") r = check_components();
  else if (name == "verify-bt") r = check_bt(cfg);
  else if (name == "expand-bt") r = check_series(cfg);
  else if (name == "closed-form") r = check_closed_form(cfg);
  else if (name == "redundancy") r = check_redundancy(cfg);
  else if (name == "currents") r = check_currents(cfg);
  else if (name == "conservation-audit") r = check_audit(cfg);
  else if (name == "kink") r = check_kink(cfg);
  else if (name == "bt-numeric") r = check_bt_numeric(cfg);
  else if (name == "fermions") r = check_fermions(cfg);
  else throw Error(ErrorKind::ConfigError, "unknown check '" + name + "'");
  r.check = name;
  r.elapsed_ms = ms_since(t0);
  return r;
}

nlohmann::json report_json(const Report& r) { return body_json(r, false); }

std::string canonical_text(const Report& r) { return render_text(r); }

bool any_fail(const Report& r) {
  if (r.status == Status::Fail) return true;
  return std::any_of(r.children.begin(), r.children.end(), [](const Report& c) { return any_fail(c); });
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
  std::vector<std::string> names = cfg.checks.empty() ? all_checks() : cfg.checks;
  // Keep the canonical order and drop duplicates.
  std::vector<std::string> ordered;
  for (const auto& n : all_checks())
    if (std::find(names.begin(), names.end(), n) != names.end()) ordered.push_back(n);

  std::map<std::string, Report> done;
  std::map<std::string, std::string> errors;
  std::vector<std::pair<std::string, std::future<Report>>> pending;
  auto drain = [&](size_t keep) {
    while (pending.size() > keep) {
      auto& [n, f] = pending.front();
      try {
        done[n] = f.get();
      } catch (const std::exception& e) {
        errors[n] = e.what();
      }
      pending.erase(pending.begin());
    }
  };
  for (const auto& n : ordered) {
    drain(static_cast<size_t>(cfg.workers) - 1);
    pending.emplace_back(n, std::async(std::launch::async, [n, &cfg] { return run_check(n, cfg); }));
  }
  drain(0);

  bool fail = false;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& n : ordered) {
    if (auto e = errors.find(n); e != errors.end()) {
      Report r = group(n);
      r.status = Status::Fail;
      r.details = "error: " + e->second;
      done[n] = r;
    }
    const Report& r = done[n];
    fail = fail || any_fail(r);
    const std::string text = canonical_text(r);
    if (!cfg.golden_dir.empty() && !is_numeric(n) && !golden(cfg, n, text, err)) fail = true;
    if (cfg.format == "json") arr.push_back(report_json(r));
    else out << text;
  }
  if (cfg.format == "json") out << arr.dump(2) << "\n";

  err << "timing (ms):";
  for (const auto& n : ordered) err << " " << n << "=" << static_cast<long>(done[n].elapsed_ms);
  err << "\n";
  return fail ? 1 : 0;
}

}  // namespace zzsg
