#include "nlgeom/scenario.hpp"

#include "nlgeom/fabrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace nlgeom::cli {

namespace {

Vector param_vector(const ComponentSpec& spec, const std::string& key) {
  const auto& v = spec.params.at(key);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double param(const ComponentSpec& spec, const std::string& key) { return spec.params.at(key).front(); }

double param(const ComponentSpec& spec, const std::string& key, double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second.front();
}

FabricComponent build_component(const ComponentSpec& spec, std::size_t dim, std::uint64_t seed) {
  const std::string& b = spec.builder;
  if (b == "euclidean") return euclidean_component(dim);
  if (b == "circle_barrier" || b == "obstacle_barrier")
    return obstacle_barrier(param_vector(spec, "center"), param(spec, "radius"), param(spec, "lambda"), param(spec, "k"));
  if (b == "wall_barrier")
    return wall_barrier(Box{param_vector(spec, "lower"), param_vector(spec, "upper")}, param(spec, "lambda"),
                        param(spec, "k"));
  if (b == "vortex") {
    const auto vseed = spec.params.count("seed") ? static_cast<std::uint64_t>(param(spec, "seed")) : seed;
    return vortex(vseed, param(spec, "strength"), Box{param_vector(spec, "region_lower"), param_vector(spec, "region_upper")},
                  static_cast<int>(param(spec, "bumps", 6.0)));
  }
  if (b == "attractor")
    return attractor_geometry(param_vector(spec, "target"), param(spec, "gain"), param(spec, "smoothing", 0.5));
  throw ValidationError("unknown builder '" + b + "'");
}

struct System {
  AutonomousAcceleration accel;
  std::function<double(const State&)> energy;
  std::function<double(const Vector&)> clearance;
};

System build_system(const Scenario& sc, bool forced, std::uint64_t seed) {
  std::vector<FabricComponent> comps;
  for (const auto& spec : sc.components) {
    try {
      comps.push_back(build_component(spec, sc.dimension, seed));
    } catch (const ValidationError& e) {
      throw ParseError(sc.source, spec.line, e.what());
    }
  }
  if (forced && !sc.forcing) throw ValidationError(sc.source + ": --forced needs a forcing block");
  if (forced && !sc.fabric) throw ValidationError(sc.source + ": --forced needs a fabric block");

  System sys;
  if (!sc.fabric) {
    const FabricComponent c = comps.front();
    sys.accel = [g = c.geometry](const State& s) -> Vector { return -g(s); };
    sys.energy = [le = c.energy.le](const State& s) { return le(s); };
    sys.clearance = c.clearance;
    return sys;
  }
  const Fabric fabric{std::move(comps)};
  sys.clearance = [fabric](const Vector& x) { return fabric.min_clearance(x); };
  if (forced) {
    const ForcingTerm term{quadratic_potential(sc.forcing->target, sc.forcing->gain), sc.forcing->damping};
    sys.accel = [fabric, term](const State& s) { return forced_acceleration(fabric, term, s); };
    sys.energy = [fabric, term](const State& s) { return fabric.energy(s) + term.potential(s); };
  } else {
    sys.accel = [fabric](const State& s) -> Vector { return -combine(fabric, s); };
    sys.energy = [fabric](const State& s) { return fabric.energy(s); };
  }
  return sys;
}

ParticleRun run_one(const Scenario& sc, const System& sys, bool forced, std::size_t p, std::size_t k) {
  ParticleRun run;
  run.particle = p;
  run.speed_index = k;
  run.speed = sc.speeds[k];
  const auto& start = sc.particles[p];
  const State s0{start.position, run.speed * start.direction};
  IntegratorConfig cfg = sc.integrator;
  if (forced && sc.forcing->horizon)
    cfg.horizon = *sc.forcing->horizon;
  else if (sc.scale_horizon_by_speed && !forced)
    cfg.horizon /= run.speed;

  std::vector<Probe> probes{{"energy", sys.energy}};
  const auto clearance = sys.clearance;
  probes.push_back({"min_phi", [clearance](const State& s) {
                      return clearance ? clearance(s.x) : std::numeric_limits<double>::infinity();
                    }});
  run.trajectory = integrate(sys.accel, s0, cfg, probes);
  const auto& e = run.trajectory.diagnostics["energy"];
  const auto& phi = run.trajectory.diagnostics["min_phi"];
  if (!e.empty()) {
    double worst = 0.0;
    for (double v : e) worst = std::max(worst, std::abs(v - e.front()));
    run.energy_drift = worst / std::max(std::abs(e.front()), 1e-12);
  }
  run.min_clearance = phi.empty() ? std::numeric_limits<double>::infinity() : *std::min_element(phi.begin(), phi.end());
  return run;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string format_csv(const Trajectory& traj) {
  const std::size_t n = traj.dim();
  std::string out = "t";
  for (std::size_t i = 0; i < n; ++i) out += ",x" + std::to_string(i);
  for (std::size_t i = 0; i < n; ++i) out += ",v" + std::to_string(i);
  out += ",energy,min_phi\n";
  auto channel = [&](const char* name, std::size_t k) {
    auto it = traj.diagnostics.find(name);
    return it == traj.diagnostics.end() ? std::numeric_limits<double>::quiet_NaN() : it->second[k];
  };
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out += fmt(traj.times[k]);
    for (std::size_t i = 0; i < n; ++i) out += "," + fmt(traj.states[k].x[static_cast<Eigen::Index>(i)]);
    for (std::size_t i = 0; i < n; ++i) out += "," + fmt(traj.states[k].xd[static_cast<Eigen::Index>(i)]);
    out += "," + fmt(channel("energy", k)) + "," + fmt(channel("min_phi", k)) + "\n";
  }
  return out;
}

std::string render_svg(const std::vector<std::string>& csv_texts, const std::vector<double>& speeds,
                       const std::optional<std::array<double, 4>>& bounds) {
  constexpr std::size_t kMaxPoints = 2000;
  std::vector<std::vector<std::pair<double, double>>> lines;
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const auto& text : csv_texts) {
    std::istringstream in(text);
    std::string row;
    std::getline(in, row);
    const bool planar = row.find(",x1,") != std::string::npos;
    std::vector<std::pair<double, double>> pts;
    while (std::getline(in, row)) {
      std::istringstream cells(row);
      std::string t, x, y = "0";
      std::getline(cells, t, ',');
      std::getline(cells, x, ',');
      if (planar) std::getline(cells, y, ',');
      pts.emplace_back(std::strtod(x.c_str(), nullptr), std::strtod(y.c_str(), nullptr));
    }
    for (const auto& [px, py] : pts) {
      xmin = std::min(xmin, px);
      xmax = std::max(xmax, px);
      ymin = std::min(ymin, py);
      ymax = std::max(ymax, py);
    }
    lines.push_back(std::move(pts));
  }
  if (bounds) {
    xmin = (*bounds)[0];
    ymin = (*bounds)[1];
    xmax = (*bounds)[2];
    ymax = (*bounds)[3];
  } else if (!(xmax > xmin) || !(ymax > ymin)) {
    xmin = -1.0;
    ymin = -1.0;
    xmax = 1.0;
    ymax = 1.0;
  }
  const double w = xmax - xmin, h = ymax - ymin;
  const double stroke = 0.003 * std::max(w, h);

  std::vector<double> distinct(speeds);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  auto opacity = [&](double speed) {
    if (distinct.size() < 2) return 1.0;
    const auto rank = std::lower_bound(distinct.begin(), distinct.end(), speed) - distinct.begin();
    return 1.0 - 0.7 * static_cast<double>(rank) / static_cast<double>(distinct.size() - 1);
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\""
      << static_cast<int>(std::lround(800.0 * h / w)) << "\" viewBox=\"" << fmt(xmin) << " " << fmt(-ymax) << " "
      << fmt(w) << " " << fmt(h) << "\">\n"
      << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-linejoin=\"round\">\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& pts = lines[i];
    const std::size_t stride = std::max<std::size_t>(1, (pts.size() + kMaxPoints - 1) / kMaxPoints);
    out << "<polyline stroke=\"#1f4e9c\" stroke-width=\"" << fmt(stroke) << "\" stroke-opacity=\""
        << fmt(opacity(i < speeds.size() ? speeds[i] : 0.0)) << "\" points=\"";
    for (std::size_t k = 0; k < pts.size(); k += stride) out << fmt(pts[k].first) << "," << fmt(pts[k].second) << " ";
    if (!pts.empty() && (pts.size() - 1) % stride != 0) out << fmt(pts.back().first) << "," << fmt(pts.back().second);
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

RunReport run_scenario(const Scenario& sc, const RunOptions& options) {
  const std::uint64_t seed = options.seed.value_or(sc.seed);
  const System sys = build_system(sc, options.forced, seed);

  RunReport report;
  report.name = sc.name;
  report.forced = options.forced;
  const std::size_t np = sc.particles.size(), ns = sc.speeds.size();
  if (options.parallel) {
    std::vector<std::future<ParticleRun>> jobs;
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t k = 0; k < ns; ++k)
        jobs.push_back(std::async(std::launch::async, [&sc, &sys, &options, p, k] { return run_one(sc, sys, options.forced, p, k); }));
    for (auto& j : jobs) report.runs.push_back(j.get());
  } else {
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t k = 0; k < ns; ++k) report.runs.push_back(run_one(sc, sys, options.forced, p, k));
  }

  bool aborted = false;
  report.min_clearance = std::numeric_limits<double>::infinity();
  for (const auto& r : report.runs) {
    report.min_clearance = std::min(report.min_clearance, r.min_clearance);
    if (r.trajectory.aborted()) {
      aborted = true;
      report.failures.push_back("particle " + std::to_string(r.particle) + " speed " + fmt(r.speed) +
                                ": integration aborted: " + r.trajectory.termination.message);
    }
    if (sc.forcing && !r.trajectory.empty()) {
      const double d = (r.trajectory.states.back().x - sc.forcing->target).norm();
      report.max_final_target_distance = std::max(report.max_final_target_distance, d);
    }
  }
  for (std::size_t p = 0; p < np; ++p) {
    double worst = 0.0;
    const auto& base = report.runs[p * ns].trajectory;
    for (std::size_t k = 1; k < ns; ++k) {
      const auto& other = report.runs[p * ns + k].trajectory;
      double d = std::numeric_limits<double>::quiet_NaN();
      if (base.size() >= 2 && other.size() >= 2) {
        try {
          d = path_distance(base, other);
        } catch (const std::exception&) {
        }
      }
      worst = std::isnan(d) || std::isnan(worst) ? std::numeric_limits<double>::quiet_NaN() : std::max(worst, d);
    }
    report.cross_speed_distance.push_back(worst);
    if (std::isnan(worst) || std::isnan(report.max_cross_speed_distance))
      report.max_cross_speed_distance = std::numeric_limits<double>::quiet_NaN();
    else
      report.max_cross_speed_distance = std::max(report.max_cross_speed_distance, worst);
  }

  if (sc.checks.max_path_distance && !options.forced && ns > 1 &&
      !(report.max_cross_speed_distance <= *sc.checks.max_path_distance))
    report.failures.push_back("cross-speed path distance " + short_fmt(report.max_cross_speed_distance) + " > " +
                              short_fmt(*sc.checks.max_path_distance));
  if (sc.checks.target_radius && options.forced && !(report.max_final_target_distance <= *sc.checks.target_radius))
    report.failures.push_back("final target distance " + short_fmt(report.max_final_target_distance) + " > " +
                              short_fmt(*sc.checks.target_radius));
  if (sc.checks.require_clearance && !(report.min_clearance > 0.0))
    report.failures.push_back("barrier clearance reached " + short_fmt(report.min_clearance));

  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    std::vector<std::string> texts;
    std::vector<double> speeds;
    const std::string tag = sc.name + (options.forced ? "_forced" : "");
    for (auto& r : report.runs) {
      texts.push_back(format_csv(r.trajectory));
      speeds.push_back(r.speed);
      char name[64];
      std::snprintf(name, sizeof name, "_p%02zu_s%zu.csv", r.particle, r.speed_index);
      r.csv_file = tag + name;
      if (sc.output.csv) {
        write_file(*options.out_dir / r.csv_file, texts.back());
        report.emitted_files.push_back((*options.out_dir / r.csv_file).string());
      }
    }
    if (sc.output.svg) {
      const auto path = *options.out_dir / (tag + ".svg");
      write_file(path, render_svg(texts, speeds, sc.output.bounds));
      report.emitted_files.push_back(path.string());
    }
  }

  report.exit_code = aborted ? 3 : (report.failures.empty() ? 0 : 2);
  return report;
}

void print_summary(std::ostream& out, const RunReport& r) {
  out << "scenario " << r.name << (r.forced ? " (forced)" : "") << "\n";
  out << std::left << std::setw(9) << "particle" << std::setw(8) << "speed" << std::setw(12) << "stop"
      << std::setw(30) << "final position" << std::setw(12) << "drift" << std::setw(12) << "min_phi" << "\n";
  for (const auto& run : r.runs) {
    std::ostringstream pos;
    if (!run.trajectory.empty()) {
      const Vector& x = run.trajectory.states.back().x;
      for (Eigen::Index i = 0; i < x.size(); ++i) pos << (i ? " " : "") << std::setprecision(6) << x[i];
    }
    out << std::left << std::setw(9) << run.particle << std::setw(8) << run.speed << std::setw(12)
        << to_string(run.trajectory.termination.reason) << std::setw(30) << pos.str() << std::setw(12)
        << short_fmt(run.energy_drift) << std::setw(12) << short_fmt(run.min_clearance) << "\n";
  }
  if (!r.cross_speed_distance.empty() && !r.forced)
    out << "max cross-speed path distance: " << short_fmt(r.max_cross_speed_distance) << "\n";
  out << "min barrier clearance: " << short_fmt(r.min_clearance) << "\n";
  if (r.forced) out << "max final target distance: " << short_fmt(r.max_final_target_distance) << "\n";
  for (const auto& f : r.failures) out << "FAILED: " << f << "\n";
  for (const auto& f : r.emitted_files) out << "wrote " << f << "\n";
}

}  // namespace nlgeom::cli
