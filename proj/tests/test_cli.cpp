#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zzsg/cli.hpp"

using namespace zzsg;

namespace {

std::vector<GradedExpr> canonical_samples() {
  std::vector<GradedExpr> v;
  v.push_back(euler_lagrange(sine_gordon_lagrangian()));
  for (const auto& e : component_equations(true)) v.push_back(e.residual);
  for (const auto& e : component_equations(false)) v.push_back(e.residual);
  for (const auto& c : expand_series(minus_system(), 6)) v.push_back(c);
  for (const auto& c : expand_series(plus_system(), 4)) v.push_back(c);
  v.push_back(bt_compatibility(minus_system()));
  v.push_back(generic_superfield("Phi", 1).expr);
  v.push_back(sg_residual(generic_superfield("Phi", 0)));
  for (const auto& [j, rhs] : export_body_system(minus_system()).relations) v.push_back(rhs);
  return v;
}

std::filesystem::path tmpdir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("zzsg_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("parse of print is the identity on canonical forms") {
  for (const auto& e : canonical_samples()) {
    INFO(e.str());
    CHECK(parse_expr(e.str()) == e);
  }
}

TEST_CASE("parser examples") {
  CHECK(parse_expr("lambda+ * lambda-").str() == "alpha");
  CHECK(parse_expr("lambda- * lambda+").str() == "-alpha");
  CHECK(parse_expr("v+ * v-").str() == "1");
  CHECK(parse_expr("v+^-2") == parse_expr("v- * v-"));
  CHECK(parse_expr("X_{-+}") == GradedExpr::jet(make_jet("X", 1, 1)));
  CHECK(parse_expr("D- Phi", {{}, true}) == apply(deriv_Dm(), generic_superfield("Phi", 0).expr));
  CHECK(parse_expr("D- D+ Phi + D+ D- Phi") == parse_expr("2*D- D+ Phi"));
  CHECK(parse_expr("Z Phi").is_zero());
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_expr("sin()");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
    CHECK(e.line() == 1);
    CHECK(e.col() == 5);
  }
  try {
    parse_expr("1 +\n  foo");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ErrorKind::UnknownSymbol);
    CHECK(e.line() == 2);
    CHECK(e.col() == 3);
  }
  CHECK_THROWS_AS(parse_expr("(X"), ParseError);
  CHECK_THROWS_AS(parse_expr("X^-1"), ParseError);
  CHECK_THROWS_AS(parse_expr("1/0"), ParseError);
  CHECK_THROWS_AS(parse_expr("X $"), ParseError);
}

TEST_CASE("describe reports degree and weight") {
  CHECK(describe(parse_expr("lambda+")) == "lambda+\n  degree (0,1), weight 1/2");
  CHECK(describe(parse_expr("1 + alpha")).ends_with("inhomogeneous"));
}

TEST_CASE("config validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.checks = {"nope"};
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.grid.dt = c.grid.h;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.format = "xml";
  std::ostringstream out, err;
  CHECK(run(c, out, err) == 2);
}

TEST_CASE("run exit codes") {
  RunConfig c;
  c.checks = {"currents", "derive-eom"};
  std::ostringstream out, err;
  CHECK(run(c, out, err) == 0);
  CHECK(out.str().starts_with("[pass] derive-eom\n"));

  c.sabotage = true;
  std::ostringstream out2, err2;
  CHECK(run(c, out2, err2) == 1);
}

TEST_CASE("json reports follow the schema shape") {
  RunConfig c;
  c.checks = {"components"};
  c.format = "json";
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == 0);
  auto j = nlohmann::json::parse(out.str());
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  CHECK(j[0]["check"] == "components");
  CHECK(j[0]["status"] == "pass");
  CHECK(j[0]["residual_terms"].is_array());
  CHECK(j[0]["details"]["children"].size() == 5);
  CHECK_FALSE(j[0].contains("timing"));

  Report r = Report::from_residual("x", parse_expr("D- Phi - 2*alpha"));
  auto rj = report_json(r);
  CHECK(rj["status"] == "fail");
  CHECK(rj["residual_terms"] == nlohmann::json::array({"D- Phi", "-2*alpha"}));
}

TEST_CASE("golden files") {
  auto dir = tmpdir("golden");
  RunConfig c;
  c.checks = {"derive-eom"};
  c.golden_dir = dir.string();
  std::ostringstream o1, e1;
  CHECK(run(c, o1, e1) == 0);
  CHECK(std::filesystem::exists(dir / "derive-eom.txt"));
  std::ostringstream o2, e2;
  CHECK(run(c, o2, e2) == 0);
  CHECK(o1.str() == o2.str());

  std::ofstream(dir / "derive-eom.txt") << "stale\n";
  std::ostringstream o3, e3;
  CHECK(run(c, o3, e3) == 1);
  CHECK(e3.str().find("GoldenMismatch") != std::string::npos);

  c.update_golden = true;
  std::ostringstream o4, e4;
  CHECK(run(c, o4, e4) == 0);
  c.update_golden = false;
  std::ostringstream o5, e5;
  CHECK(run(c, o5, e5) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("kink check writes CSV") {
  auto dir = tmpdir("csv");
  RunConfig c;
  c.checks = {"kink"};
  c.csv_dir = dir.string();
  std::ostringstream out, err;
  CHECK(run(c, out, err) == 0);
  CHECK(out.str().find("[pass] static kink residual, h = 2^-9, 5-point stencil") != std::string::npos);
  std::ifstream f(dir / "kink.csv");
  std::string header, cols;
  std::getline(f, header);
  std::getline(f, cols);
  CHECK(header.starts_with("# {"));
  CHECK(cols == "t,x,X,psi_plus_lambda_plus_coeff,psi_minus_lambda_minus_coeff,residual");
  std::filesystem::remove_all(dir);
}
