#include "nlgeom/suites.hpp"

#include "nlgeom/finsler.hpp"
#include "nlgeom/geometry.hpp"
#include "nlgeom/integrate.hpp"
#include "nlgeom/linalg.hpp"
#include "nlgeom/random.hpp"
#include "nlgeom/riemann.hpp"
#include "nlgeom/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace nlgeom::suites {

bool SuiteReport::ok() const {
  return std::all_of(measurements.begin(), measurements.end(), [](const Measurement& m) { return m.pass(); });
}

void SuiteReport::add(std::string name, double value, double tolerance, bool at_least) {
  measurements.push_back({std::move(name), value, tolerance, at_least});
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"homogeneity", "lemma1",  "theorem1", "theorem2",
                                              "riemann-oracle", "energy", "fabric"};
  return names;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, const Hooks& hooks) {
  if (name == "homogeneity") return homogeneity(seed, 200, hooks);
  if (name == "lemma1") return lemma1(seed);
  if (name == "theorem1") return theorem1(seed);
  if (name == "theorem2") return theorem2(seed);
  if (name == "riemann-oracle") return riemann_oracle(seed);
  if (name == "energy") return energy(seed);
  if (name == "fabric") return fabric(seed);
  std::string known;
  for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError("unknown suite '" + name + "' (known: " + known + ")");
}

namespace {

std::vector<State> random_states(Rng& rng, std::size_t count, Eigen::Index n = 2) {
  std::vector<State> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(rng.state(n, 1.0, 0.3, 2.0));
  return out;
}

Vector flatten(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Vector scalar(double v) { return Vector::Constant(1, v); }

// d/dz of the Lagrange interpolant through (nodes, values) at z, weights by Fornberg's recursion.
std::vector<double> derivative_weights(double z, const std::vector<double>& nodes) {
  const std::size_t n = nodes.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
  double c1 = 1.0, c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

GeometryHandle test_spray() {
  return GeometryHandle(
      2,
      [](const State& s) -> Vector {
        Vector h(2);
        h << 0.5 * std::sin(s.x[0]), 0.3 * std::cos(s.x[1]);
        return s.xd.squaredNorm() * h + 0.4 * s.x.dot(s.xd) * s.xd;
      },
      "spray");
}

std::vector<GeometryHandle> theorem1_geometries() {
  std::vector<GeometryHandle> out;
  for (const auto& f : zoo::structures()) out.push_back(geodesic_geometry(f));
  Vector center(2);
  center << 2.5, 0.3;
  out.push_back(circle_barrier_geometry(center, 1.0, 0.7, 0.5));
  out.push_back(test_spray());
  return out;
}

}  // namespace

std::vector<Vector> differentiate_velocities(const Trajectory& traj) {
  const std::size_t n = traj.size();
  if (n < 5) throw ValidationError("need at least five samples to differentiate");
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t first = std::min(k < 2 ? 0 : k - 2, n - 5);
    std::vector<double> nodes(5);
    for (std::size_t i = 0; i < 5; ++i) nodes[i] = traj.times[first + i];
    const auto w = derivative_weights(traj.times[k], nodes);
    Vector acc = Vector::Zero(traj.states[k].xd.size());
    for (std::size_t i = 0; i < 5; ++i) acc += w[i] * traj.states[first + i].xd;
    out.push_back(std::move(acc));
  }
  return out;
}

SuiteReport homogeneity(std::uint64_t seed, std::size_t samples, const Hooks& hooks) {
  SuiteReport r{"homogeneity", {}};
  Rng rng(seed);
  const auto states = random_states(rng, samples);
  for (const auto& f : zoo::structures()) {
    const auto tag = f.name + ": ";
    r.add(tag + "L_g degree 1", check_homogeneity([&](const State& s) { return scalar(f.lg(s)); }, states, 1).max_violation,
          1e-10);
    r.add(tag + "L_e degree 2", check_homogeneity([&](const State& s) { return scalar(f.le(s)); }, states, 2).max_violation,
          1e-10);
    r.add(tag + "M_e degree 0",
          check_homogeneity([&](const State& s) { return flatten(energy_terms(f, s).me); }, states, 0).max_violation,
          1e-10);
    r.add(tag + "f_e degree 2",
          check_homogeneity([&](const State& s) { return energy_terms(f, s).fe; }, states, 2).max_violation, 1e-10);
    r.add(tag + "p_e degree 1",
          check_homogeneity([&](const State& s) { return energy_terms(f, s).pe; }, states, 1).max_violation, 1e-10);
    r.add(tag + "M_e^-1 f_e degree 2", check_homogeneity(geodesic_geometry(f), states, 2).max_violation, 1e-10);
  }
  if (hooks.homogeneity_impostor) {
    const ScalarField& g = *hooks.homogeneity_impostor;
    r.add(g.name() + ": declared degree 1",
          check_homogeneity([&](const State& s) { return scalar(g(s)); }, states, 1).max_violation, 1e-10);
  }
  return r;
}

SuiteReport lemma1(std::uint64_t seed, std::size_t states) {
  SuiteReport r{"lemma1", {}};
  Rng rng(seed);
  const auto samples = random_states(rng, states);
  for (const auto& f : zoo::structures()) {
    double momentum = 0.0, energy = 0.0;
    for (const auto& s : samples) {
      const auto e = momentum_identity_errors(energy_terms(f, s), s.xd);
      momentum = std::max(momentum, e.momentum);
      energy = std::max(energy, e.energy);
    }
    r.add(f.name + ": p_e = M_e xd", momentum, 1e-10);
    r.add(f.name + ": energy expressions agree", energy, 1e-10);
  }
  return r;
}

SuiteReport theorem1(std::uint64_t seed, std::size_t pairs) {
  SuiteReport r{"theorem1", {}};
  Rng rng(seed);
  const auto geometries = theorem1_geometries();
  IntegratorConfig cfg;
  cfg.step = 1e-3;
  cfg.horizon = 2.0;
  double explicit_chain = 0.0, explicit_diff = 0.0, generating_chain = 0.0, generating_diff = 0.0;
  double failures = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const GeometryHandle& g = geometries[i % geometries.size()];
    const State s0 = rng.state(2, 1.0, 0.5, 1.5);
    const double c0 = rng.uniform(-0.5, 0.5), c1 = rng.uniform(-0.5, 0.5);
    const double omega = rng.uniform(0.5, 3.0), phase = rng.uniform(0.0, 6.283185307179586);
    const AlphaProfile a = [=](double s) { return c0 + c1 * std::sin(omega * s + phase); };
    try {
      // generating solution retimed into explicit form
      const Trajectory gen = integrate([&g](const State& s) { return generating_acceleration(g, s); }, s0, cfg);
      if (gen.aborted()) throw DomainError("integration aborted", gen.termination.message);
      Trajectory ex = reparameterize(gen, a);
      const auto& alpha = ex.diagnostics.at("alpha_explicit");
      explicit_chain = std::max(explicit_chain, explicit_residual(g, ex, alpha));
      ex.accelerations = differentiate_velocities(ex);
      explicit_diff = std::max(explicit_diff, explicit_residual(g, ex, alpha));

      // explicit solution retimed into generating form
      const Trajectory sol = integrate(
          [&g, a](double t, const State& s) { return explicit_acceleration(g, s, a(t)); }, s0, cfg);
      if (sol.aborted()) throw DomainError("integration aborted", sol.termination.message);
      Trajectory back = reparameterize(sol, a);
      generating_chain = std::max(generating_chain, generating_residual(g, back));
      back.accelerations = differentiate_velocities(back);
      generating_diff = std::max(generating_diff, generating_residual(g, back));
    } catch (const std::exception&) {
      failures += 1.0;
    }
  }
  r.add("explicit residual after retiming (chain rule)", explicit_chain, 1e-6);
  r.add("explicit residual after retiming (differenced)", explicit_diff, 1e-6);
  r.add("generating residual after retiming (chain rule)", generating_chain, 1e-6);
  r.add("generating residual after retiming (differenced)", generating_diff, 1e-6);
  r.add("pairs that failed to integrate", failures, 0.0);
  return r;
}

SuiteReport theorem2(std::uint64_t seed, std::size_t states) {
  SuiteReport r{"theorem2", {}};
  Rng rng(seed);
  const auto samples = random_states(rng, states);
  double probe = std::numeric_limits<double>::infinity();
  for (const auto& f : zoo::structures()) {
    Theorem2Report worst;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const State& s = samples[k];
      const auto t = verify_theorem2(f, s, 5, seed + k);
      worst.max_residual = std::max(worst.max_residual, t.max_residual);
      worst.route_error = std::max(worst.route_error, t.route_error);
      worst.identity_error = std::max(worst.identity_error, t.identity_error);
      worst.null_residual = std::max(worst.null_residual, t.null_residual);
      worst.orthogonality = std::max(worst.orthogonality, t.orthogonality);

      // a 1e-3 push orthogonal to a unit velocity must show up in the residual
      const State unit(s.x, s.xd / s.xd.norm());
      const auto e = energy_terms(f, unit);
      const auto g = geometric_terms(f, unit);
      Vector perp(2);
      perp << -unit.xd[1], unit.xd[0];
      const Vector push = 1e-3 * perp / perp.norm();
      probe = std::min(probe, geometric_residual(g, -solve_symmetric(e.me, e.fe, kEnergyTensorConditionLimit) + push));
    }
    r.add(f.name + ": geometric residual of explicit family", worst.max_residual, 1e-8);
    r.add(f.name + ": M_g, f_g autodiff vs closed form", worst.route_error, 1e-8);
    r.add(f.name + ": M_e R_pe M_e = R_xd", worst.identity_error, 1e-8);
    r.add(f.name + ": M_g xd = 0", worst.null_residual, 1e-8);
    r.add(f.name + ": f_g . xd = 0", worst.orthogonality, 1e-8);
  }
  r.add("orthogonal 1e-3 perturbation detected (min residual)", probe, 1e-4, true);
  return r;
}

SuiteReport riemann_oracle(std::uint64_t seed, std::size_t metrics, std::size_t states) {
  SuiteReport r{"riemann-oracle", {}};
  Rng rng(seed);
  double mg = 0.0, fe = 0.0, me = 0.0;
  for (std::size_t i = 0; i < metrics; ++i) {
    const std::size_t n = 2 + i % 3;
    const MetricField metric = zoo::dense_metric(n, seed * 1000 + i);
    const FinslerStructure f = riemannian_structure(metric);
    for (std::size_t k = 0; k < states; ++k) {
      const State s = rng.state(static_cast<Eigen::Index>(n), 1.0, 0.3, 2.0);
      const auto e = energy_terms(f, s);
      const auto g = geometric_terms(f, s);
      mg = std::max(mg, mixed_error(g.mg, closed_form_mg(metric, s)));
      fe = std::max(fe, mixed_error(e.fe, fictitious_force(metric, s)));
      me = std::max(me, mixed_error(e.me, metric(s.x)));
    }
  }
  r.add("M_g generic vs closed form", mg, 1e-8);
  r.add("f_e generic vs Christoffel assembly", fe, 1e-8);
  r.add("M_e vs G", me, 1e-8);
  return r;
}

SuiteReport energy(std::uint64_t seed, double horizon, double step) {
  SuiteReport r{"energy", {}};
  Rng rng(seed);
  for (const auto& f : zoo::structures()) {
    const State s0 = rng.state(2, 1.0, 0.5, 1.5);
    const GeometryHandle g = geodesic_geometry(f);
    const AutonomousAcceleration accel = [&g](const State& s) { return generating_acceleration(g, s); };
    auto drift_at = [&](double h) {
      IntegratorConfig cfg;
      cfg.step = h;
      cfg.horizon = horizon;
      const Trajectory t = integrate(accel, s0, cfg);
      return t.aborted() ? std::numeric_limits<double>::infinity() : energy_drift(t, f.le);
    };
    const double fine = drift_at(step);
    r.add(f.name + ": relative energy drift", fine, 1e-6);
    // the halving ratio is read at coarse steps where truncation error still dominates rounding
    const double coarse = 40.0 * step;
    const double d1 = drift_at(coarse), d2 = drift_at(coarse / 2.0);
    const double ratio = d1 <= 1e-13 ? std::numeric_limits<double>::infinity() : d1 / std::max(d2, 1e-300);
    r.add(f.name + ": drift ratio under step halving", ratio, 8.0, true);
  }
  return r;
}

Fabric demo_fabric(std::uint64_t seed) {
  Box walls{Vector::Constant(2, -5.0), Vector::Constant(2, 5.0)};
  Box region{Vector::Constant(2, -4.0), Vector::Constant(2, 4.0)};
  Vector obstacle(2), target(2);
  obstacle << 0.0, 0.0;
  target << 3.5, 0.0;
  Fabric f;
  f.components.push_back(euclidean_component(2));
  f.components.push_back(wall_barrier(walls, 0.5, 0.5));
  f.components.push_back(obstacle_barrier(obstacle, 1.0, 0.7, 0.5));
  f.components.push_back(vortex(seed, 0.3, region, 6));
  f.components.push_back(attractor_geometry(target, 0.5, 0.5));
  return f;
}

SuiteReport fabric(std::uint64_t seed) {
  SuiteReport r{"fabric", {}};
  const Fabric f = demo_fabric(7);
  Vector target(2);
  target << 3.5, 0.0;
  const ForcingTerm forcing{quadratic_potential(target, 3.0), 6.0};
  Rng rng(seed);

  // pointwise energy balance at random admissible states
  double unforced_power = 0.0, forced_power = 0.0;
  std::size_t taken = 0;
  while (taken < 200) {
    State s = rng.state(2, 4.5, 0.3, 2.0);
    if (s.x.norm() < 1.3) continue;
    ++taken;
    auto power = [&](const Vector& xdd, bool with_potential) {
      double p = 0.0;
      for (const auto& c : f.components) {
        const Jet2 j = evaluate_gradient(c.energy.le, s);
        p += j.grad_x().dot(s.xd) + j.grad_xd().dot(xdd);
      }
      if (with_potential) p += evaluate_gradient(forcing.potential, s).grad_x().dot(s.xd);
      return p;
    };
    const double scale = 1.0 + f.metric(s).norm() * s.xd.squaredNorm();
    unforced_power = std::max(unforced_power, std::abs(power(-combine(f, s), false)) / scale);
    const double dissipation = forcing.damping * s.xd.squaredNorm();
    forced_power = std::max(forced_power, std::abs(power(forced_acceleration(f, forcing, s), true) + dissipation) / scale);
  }
  r.add("unforced fabric: d/dt sum L_e = 0", unforced_power, 1e-10);
  r.add("forced fabric: d/dt (sum L_e + psi) = -B |xd|^2", forced_power, 1e-10);

  // per-component energization along trajectories
  IntegratorConfig cfg;
  cfg.step = 1e-3;
  cfg.horizon = 5.0;
  State s0(Vector(2), Vector(2));
  s0.x << -3.5, 0.2;
  s0.xd << 1.0, 0.0;
  for (const auto& c : f.components) {
    const Trajectory t = integrate([&c](const State& s) { return energize(c, s).accel; }, s0, cfg);
    r.add(c.label + ": energized drift", t.aborted() ? std::numeric_limits<double>::infinity() : energy_drift(t, c.energy.le),
          1e-6);
  }

  // whole fabric, energy and cross-speed path agreement
  double drift = 0.0, distance = 0.0;
  for (double y : {-1.0, 0.25, 1.25}) {
    Trajectory paths[2];
    const double speeds[2] = {1.5, 0.75};
    for (int k = 0; k < 2; ++k) {
      IntegratorConfig c = cfg;
      c.horizon = 8.0 / speeds[k];
      State s(Vector(2), Vector(2));
      s.x << -3.5, y;
      s.xd << speeds[k], 0.0;
      paths[k] = integrate([&f](const State& st) -> Vector { return -combine(f, st); }, s, c);
      drift = std::max(drift, paths[k].aborted() ? std::numeric_limits<double>::infinity()
                                                 : energy_drift(paths[k], [&f](const State& st) { return f.energy(st); }));
    }
    distance = std::max(distance, path_distance(paths[0], paths[1]));
  }
  r.add("unforced fabric energy drift", drift, 1e-6);
  r.add("unforced fabric cross-speed path distance", distance, 5e-3);
  return r;
}

void print(std::ostream& out, const SuiteReport& report) {
  out << "suite " << report.suite << "\n";
  for (const auto& m : report.measurements) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-4s %-56s %.3e %s %.1e\n", m.pass() ? "ok" : "FAIL", m.name.c_str(), m.value,
                  m.at_least ? ">=" : "<=", m.tolerance);
    out << line;
  }
  out << (report.ok() ? "PASS" : "FAIL") << " " << report.suite << "\n";
}

}  // namespace nlgeom::suites
