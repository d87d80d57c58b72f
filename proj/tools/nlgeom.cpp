// nlgeom: run scenario files and property suites.

#include "nlgeom/scenario.hpp"
#include "nlgeom/suites.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr const char* kVersion = "0.1.0";

// Deliberately not degree 1 in velocity; used to show the suite catches it.
nlgeom::ScalarField impostor() {
  return nlgeom::ScalarField(
      2, [](auto, auto xd) { return nlgeom::norm(xd) + 0.1 * nlgeom::dot(xd, xd); }, "impostor");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spray geometries, Finsler structures and geometric fabrics"};
  app.set_version_flag("--version", std::string("nlgeom ") + kVersion);
  app.require_subcommand(1);

  std::string scenario_path;
  bool forced = false;
  std::string out_dir;
  std::uint64_t run_seed = 0;
  auto* run = app.add_subcommand("run", "integrate every particle and speed of a scenario file");
  run->add_option("file", scenario_path, "scenario file")->required();
  run->add_flag("--forced", forced, "apply the scenario's forcing potential and damping");
  run->add_option("--out", out_dir, "directory for CSV and SVG output");
  auto* run_seed_opt = run->add_option("--seed", run_seed, "override the scenario seed");

  std::string suite;
  std::uint64_t check_seed = 1;
  bool inject = false;
  auto* check = app.add_subcommand("check", "run a property suite");
  check->add_option("suite", suite, "suite name")->required();
  check->add_option("--seed", check_seed, "RNG seed");
  check->add_flag("--inject-impostor", inject, "add a field that is not degree 1 to the homogeneity suite")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      const auto scenario = nlgeom::cli::load_scenario(scenario_path);
      for (const auto& w : scenario.warnings) std::cerr << "warning: " << w << "\n";
      nlgeom::cli::RunOptions options;
      options.forced = forced;
      if (!out_dir.empty()) options.out_dir = out_dir;
      if (*run_seed_opt) options.seed = run_seed;
      const auto report = nlgeom::cli::run_scenario(scenario, options);
      nlgeom::cli::print_summary(std::cout, report);
      return report.exit_code;
    }
    nlgeom::suites::Hooks hooks;
    if (inject) hooks.homogeneity_impostor = impostor();
    const auto report = nlgeom::suites::run_suite(suite, check_seed, hooks);
    nlgeom::suites::print(std::cout, report);
    return report.ok() ? 0 : 2;
  } catch (const nlgeom::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
