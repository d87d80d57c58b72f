#pragma once

/// Property suites run by `nlgeom check <suite>`. Each one measures a set of
/// worst-case magnitudes against fixed tolerances with a seeded RNG.

#include "nlgeom/autodiff.hpp"
#include "nlgeom/fabrics.hpp"
#include "nlgeom/trajectory.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nlgeom::suites {

struct Measurement {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool at_least = false;  // value must reach the tolerance instead of staying below it

  bool pass() const { return at_least ? value >= tolerance : value <= tolerance; }
};

struct SuiteReport {
  std::string suite;
  std::vector<Measurement> measurements;

  bool ok() const;
  void add(std::string name, double value, double tolerance, bool at_least = false);
};

struct Hooks {
  /// Extra field checked as a degree-1 structure by the homogeneity suite.
  std::optional<ScalarField> homogeneity_impostor;
};

const std::vector<std::string>& suite_names();

/// Throws ValidationError for an unknown name.
SuiteReport run_suite(const std::string& name, std::uint64_t seed, const Hooks& hooks = {});

SuiteReport homogeneity(std::uint64_t seed, std::size_t samples = 200, const Hooks& hooks = {});
SuiteReport lemma1(std::uint64_t seed, std::size_t states = 500);
SuiteReport theorem1(std::uint64_t seed, std::size_t pairs = 20);
SuiteReport theorem2(std::uint64_t seed, std::size_t states = 100);
SuiteReport riemann_oracle(std::uint64_t seed, std::size_t metrics = 20, std::size_t states = 100);
SuiteReport energy(std::uint64_t seed, double horizon = 10.0, double step = 1e-3);
SuiteReport fabric(std::uint64_t seed);

/// Accelerations recovered from the velocity samples alone by five-point
/// finite differences on the (possibly nonuniform) time grid.
std::vector<Vector> differentiate_velocities(const Trajectory& traj);

/// The five-layer fabric of the bundled demo scenario, built in code.
Fabric demo_fabric(std::uint64_t seed = 7);

void print(std::ostream& out, const SuiteReport& report);

}  // namespace nlgeom::suites
