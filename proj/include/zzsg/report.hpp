#pragma once

// Structured verification result.

#include <string>
#include <vector>

#include "zzsg/expr.hpp"

namespace zzsg {

enum class Status { Pass, Fail, Info };
const char* to_string(Status s);

struct Report {
  std::string check;
  Status status = Status::Pass;
  GradedExpr residual;  // empty iff pass for pass/fail checks
  std::string details;
  double elapsed_ms = 0;  // kept out of the comparable body
  std::vector<Report> children;

  /// Pass/fail from a residual.
  static Report from_residual(std::string check, GradedExpr residual, std::string details = {});
  static Report info(std::string check, GradedExpr value, std::string details = {});

  /// Adds a child and downgrades this report to Fail if the child fails.
  void add(Report child);
  bool passed() const { return status != Status::Fail; }
};

/// Deterministic text rendering (no timings).
std::string render_text(const Report& r, int indent = 0);

}  // namespace zzsg
