#pragma once

/// Scenario files (grammar `fabrics-scenario v1`, see docs/scenario-format.md),
/// the batch runner, and the CSV / SVG emitters.

#include "nlgeom/errors.hpp"
#include "nlgeom/integrate.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlgeom::cli {

inline constexpr const char* kScenarioHeader = "fabrics-scenario v1";

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : ValidationError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ComponentSpec {
  std::string builder;
  std::map<std::string, std::vector<double>> params;
  int line = 0;
};

struct ParticleStart {
  Vector position;
  Vector direction;  // unit length after loading
};

struct ForcingSpec {
  Vector target;
  double gain = 1.0;
  double damping = 0.0;
  std::optional<double> horizon;  // replaces the integrator horizon in forced runs (never speed-scaled)
};

struct OutputSpec {
  bool csv = true;
  bool svg = true;
  std::optional<std::array<double, 4>> bounds;  // xmin ymin xmax ymax
};

struct ChecksSpec {
  std::optional<double> max_path_distance;
  std::optional<double> target_radius;  // final distance to the forcing target
  bool require_clearance = false;       // min barrier clearance > 0 throughout
};

struct Scenario {
  std::string source;
  std::string name;
  std::size_t dimension = 0;
  std::uint64_t seed = 1;
  bool fabric = false;  // components came from a fabric block
  std::vector<ComponentSpec> components;
  std::vector<ParticleStart> particles;
  std::vector<double> speeds;
  IntegratorConfig integrator;
  bool scale_horizon_by_speed = false;
  std::optional<ForcingSpec> forcing;
  OutputSpec output;
  ChecksSpec checks;
  std::vector<std::string> warnings;
};

Scenario parse_scenario(std::istream& in, const std::string& source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

struct RunOptions {
  bool forced = false;
  std::optional<std::filesystem::path> out_dir;  // no files without it
  std::optional<std::uint64_t> seed;
  bool parallel = true;
};

struct ParticleRun {
  std::size_t particle = 0;
  std::size_t speed_index = 0;
  double speed = 0.0;
  Trajectory trajectory;
  double energy_drift = 0.0;
  double min_clearance = 0.0;
  std::string csv_file;
};

struct RunReport {
  std::string name;
  bool forced = false;
  std::vector<ParticleRun> runs;                 // particle-major, speed-minor
  std::vector<double> cross_speed_distance;      // per particle, vs the first speed
  double max_cross_speed_distance = 0.0;
  double min_clearance = 0.0;
  double max_final_target_distance = 0.0;
  std::vector<std::string> failures;             // violated scenario checks
  std::vector<std::string> emitted_files;
  int exit_code = 0;                             // 0 ok, 2 check violation, 3 integration abort
};

RunReport run_scenario(const Scenario& scenario, const RunOptions& options);

void print_summary(std::ostream& out, const RunReport& report);

/// `t,x0..,v0..,energy,min_phi` rows with 17 significant digits.
std::string format_csv(const Trajectory& traj);
/// Overlay plot drawn from already-formatted CSV text; opacity falls with speed.
std::string render_svg(const std::vector<std::string>& csv_texts, const std::vector<double>& speeds,
                       const std::optional<std::array<double, 4>>& bounds);

}  // namespace nlgeom::cli
