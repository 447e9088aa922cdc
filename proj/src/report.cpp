#include "zzsg/report.hpp"

namespace zzsg {

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Info: return "info";
  }
  return "?";
}

Report Report::from_residual(std::string check, GradedExpr residual, std::string details) {
  Report r;
  r.check = std::move(check);
  r.status = residual.is_zero() ? Status::Pass : Status::Fail;
  r.residual = std::move(residual);
  r.details = std::move(details);
  return r;
}

Report Report::info(std::string check, GradedExpr value, std::string details) {
  Report r;
  r.check = std::move(check);
  r.status = Status::Info;
  r.residual = std::move(value);
  r.details = std::move(details);
  return r;
}

void Report::add(Report child) {
  if (child.status == Status::Fail) status = Status::Fail;
  children.push_back(std::move(child));
}

std::string render_text(const Report& r, int indent) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  std::string s = pad + "[" + to_string(r.status) + "] " + r.check;
  if (!r.residual.is_zero() || (r.status == Status::Info && r.details.empty())) s += ": " + r.residual.str();
  s += "\n";
  if (!r.details.empty()) s += pad + "    " + r.details + "\n";
  for (const auto& c : r.children) s += render_text(c, indent + 1);
  return s;
}

}  // namespace zzsg
