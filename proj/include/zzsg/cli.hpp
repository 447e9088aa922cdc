#pragma once

// Expression mini-language, run configuration and report emission.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary ('*' unary)*
//   unary  := '-' unary | power
//   power  := factor ('^' ['-'] integer)?
//   factor := rational | symbol | 'sin(' expr ')' | 'cos(' expr ')'
//           | ('D-' | 'D+' | 'Z' | 'P-' | 'P+') factor | '(' expr ')'
//
// Symbols: z, theta-, theta+, alpha, lambda+-, eta+-, v+-, a and field
// jets such as X_{-+} (= d- d+ X), psi+~, Phi.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "zzsg/numeric.hpp"

namespace zzsg {

class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, int line, int col, const std::string& msg)
      : Error(kind, "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

struct ParseOptions {
  Truncation trunc{};
  bool realize = false;  // expand abstract superfields into components
};

GradedExpr parse_expr(const std::string& src, const ParseOptions& opts = {});

/// Canonical form followed by degree and weight (or "inhomogeneous").
std::string describe(const GradedExpr& e);

const std::vector<std::string>& all_checks();

struct RunConfig {
  std::vector<std::string> checks;  // empty = all
  int order = 6;
  int audit_order = 4;
  int nz = 0;
  GridConfig grid{};
  double bt_a = 1;
  bool sabotage = false;
  std::string format = "text";
  std::string golden_dir;
  bool update_golden = false;
  std::string csv_dir;
  int workers = 4;

  /// Throws ConfigError.
  void validate() const;
};

/// Runs one named check.
Report run_check(const std::string& name, const RunConfig& cfg);

/// Schema object {check, status, residual_terms, details}.
nlohmann::json report_json(const Report& r);

/// Comparable text body (no timings).
std::string canonical_text(const Report& r);

/// True when the report or any descendant failed.
bool any_fail(const Report& r);

/// Executes the configured checks; 0 all pass, 1 failure or golden mismatch, 2 config error.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace zzsg
