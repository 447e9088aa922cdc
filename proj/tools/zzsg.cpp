#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "zzsg/cli.hpp"

int main(int argc, char** argv) {
  using namespace zzsg;
  RunConfig cfg;
  CLI::App app{"Z2xZ2-graded sine-Gordon verification suite"};
  app.allow_extras(false);

  std::string grid, parse;
  bool realize = false;
  bool list = false;
  app.add_option("--check", cfg.checks, "checks to run (default: all)")->expected(1, -1);
  app.add_option("--order", cfg.order, "series order N");
  app.add_option("--audit-order", cfg.audit_order, "conservation audit order K");
  app.add_option("--nz", cfg.nz, "z-order for --parse (0 or 1)");
  app.add_option("--format", cfg.format, "text or json");
  app.add_option("--golden", cfg.golden_dir, "golden-file directory");
  app.add_flag("--update-golden", cfg.update_golden, "rewrite golden files");
  app.add_option("--grid", grid, "L,h,dt");
  app.add_option("--bt-a", cfg.bt_a, "Backlund parameter a for bt-numeric");
  app.add_flag("--sabotage", cfg.sabotage, "flip the sign of the a^-1 Backlund rule");
  app.add_option("--csv", cfg.csv_dir, "directory for CSV output of numeric checks");
  app.add_option("--workers", cfg.workers, "worker pool size");
  app.add_option("--parse", parse, "parse an expression and print its canonical form");
  app.add_flag("--realize", realize, "with --parse: expand superfields into components");
  app.add_flag("--list", list, "list check names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (list) {
    for (const auto& c : all_checks()) std::cout << c << "\n";
    return 0;
  }

  if (!grid.empty()) {
    double v[3];
    char tail;
    if (std::sscanf(grid.c_str(), "%lf,%lf,%lf%c", &v[0], &v[1], &v[2], &tail) != 3) {
      std::cerr << "--grid expects L,h,dt\n";
      return 2;
    }
    cfg.grid = {v[0], v[1], v[2]};
  }

  if (!parse.empty()) {
    try {
      cfg.validate();
      ParseOptions o;
      o.trunc.nz = cfg.nz;
      o.realize = realize;
      std::cout << describe(parse_expr(parse, o)) << "\n";
      return 0;
    } catch (const zzsg::Error& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
  }

  return run(cfg, std::cout, std::cerr);
}
