#include "nlgeom/finsler.hpp"

#include "nlgeom/lagrangian.hpp"
#include "nlgeom/linalg.hpp"
#include "nlgeom/random.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace nlgeom {

FinslerStructure make_finsler(ScalarField lg, std::string name) {
  ScalarField le = transform(lg, [](const auto& g) { return 0.5 * (g * g); },
                             (name.empty() ? lg.name() : name) + "_energy");
  return make_finsler(std::move(lg), std::move(le), std::move(name));
}

FinslerStructure make_finsler(ScalarField lg, ScalarField le, std::string name) {
  if (lg.dim() != le.dim()) throw ValidationError("structure and energy dimension mismatch");
  FinslerStructure f;
  f.dim = lg.dim();
  f.name = name.empty() ? lg.name() : name;
  f.lg = std::move(lg);
  f.le = std::move(le);
  return f;
}

FinslerReport validate_finsler(const FinslerStructure& f, std::span<const State> samples) {
  FinslerReport report;
  auto positivity = [&](const State& s) {
    const double v = f.lg(s);
    if (v < 0.0) return -v;
    return v == 0.0 ? 1.0 : 0.0;
  };
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const State& s = samples[k];
    report.positivity_violation = std::max(report.positivity_violation, positivity(s));
    report.positivity_violation = std::max(report.positivity_violation, positivity(State(s.x, -s.xd)));
    const double at_rest = f.lg(State(s.x, Vector::Zero(s.x.size())));
    report.positivity_violation = std::max(report.positivity_violation, std::abs(at_rest));

    double cond;
    try {
      cond = condition_number(evaluate_jet(f.le, s).hess_xdxd());
    } catch (const std::exception&) {
      cond = std::numeric_limits<double>::infinity();
    }
    if (!(cond <= report.max_condition)) {
      report.max_condition = cond;
      report.worst_condition_sample = k;
    }
  }
  report.homogeneity = check_homogeneity(
      std::function<Vector(const State&)>([&](const State& s) { return Vector::Constant(1, f.lg(s)); }), samples, 1);
  return report;
}

EnergyTerms energy_terms(const FinslerStructure& f, const State& s) {
  if (s.xd.norm() < kVelocityFloor) throw DomainError("velocity floor", "energy terms need |xd| >= 1e-9");
  const Jet2 j = evaluate_jet(f.le, s);
  EnergyTerms e;
  e.me = j.hess_xdxd();
  e.fe = j.hess_xdx() * s.xd - j.grad_x();
  e.pe = j.grad_xd();
  e.le = j.value;
  return e;
}

MomentumIdentityErrors momentum_identity_errors(const EnergyTerms& e, const Vector& xd) {
  MomentumIdentityErrors out;
  out.momentum = (e.pe - e.me * xd).norm() / std::max(e.pe.norm(), 1e-300);
  const double forms[] = {
      e.le,
      0.5 * e.pe.dot(xd),
      0.5 * xd.dot(e.me * xd),
      0.5 * e.pe.dot(solve_symmetric(e.me, e.pe, kEnergyTensorConditionLimit)),
  };
  const auto [lo, hi] = std::minmax_element(std::begin(forms), std::end(forms));
  out.energy = (*hi - *lo) / std::max(std::abs(e.le), 1e-300);
  return out;
}

GeometryHandle geodesic_geometry(const FinslerStructure& f) {
  return GeometryHandle(
      f.dim,
      [f](const State& s) -> Vector {
        const EnergyTerms e = energy_terms(f, s);
        return solve_symmetric(e.me, e.fe, kEnergyTensorConditionLimit);
      },
      f.name.empty() ? "geodesic" : f.name + "_geodesic", kVelocityFloor);
}

GeometricTerms geometric_terms(const FinslerStructure& f, const State& s) {
  const EnergyTerms e = energy_terms(f, s);
  const Jet2 j = evaluate_jet(f.lg, s);
  if (!(j.value > 0.0)) throw DomainError("zero structure value", "L_g must be positive at nonzero velocity");

  GeometricTerms g;
  g.lg = j.value;
  g.mg = j.hess_xdxd();
  g.fg = j.hess_xdx() * s.xd - j.grad_x();

  const Matrix me_inv = inverse_symmetric(e.me, kEnergyTensorConditionLimit);
  const Vector& xd = s.xd;
  g.rxd = e.me - (e.pe * e.pe.transpose()) / e.pe.dot(me_inv * e.pe);
  g.rpe = me_inv - (xd * xd.transpose()) / xd.dot(e.me * xd);
  g.mg_closed = g.rxd / g.lg;
  g.fg_closed = e.me * g.rpe * e.fe / g.lg;
  g.route_error = std::max(mixed_error(g.mg, g.mg_closed), mixed_error(g.fg, g.fg_closed));
  return g;
}

double geometric_residual(const GeometricTerms& g, const Vector& xdd) {
  return (g.mg * xdd + g.fg).cwiseAbs().maxCoeff() / (1.0 + g.fg.cwiseAbs().maxCoeff());
}

Theorem2Report verify_theorem2(const FinslerStructure& f, const State& s, std::size_t trials, std::uint64_t seed) {
  const EnergyTerms e = energy_terms(f, s);
  const GeometricTerms g = geometric_terms(f, s);
  const Vector geodesic = -solve_symmetric(e.me, e.fe, kEnergyTensorConditionLimit);

  Theorem2Report report;
  report.route_error = g.route_error;
  report.identity_error = mixed_error(e.me * g.rpe * e.me, g.rxd);
  report.null_residual = (g.mg * s.xd).norm() / std::max(g.mg.norm() * s.xd.norm(), 1e-300);
  report.orthogonality = std::abs(g.fg.dot(s.xd)) / (s.xd.norm() * (g.fg.norm() + 1e-12));

  Rng rng(seed);
  report.max_residual = geometric_residual(g, geodesic);
  for (std::size_t i = 0; i < trials; ++i) {
    const double alpha = rng.uniform(-5.0, 5.0);
    report.max_residual = std::max(report.max_residual, geometric_residual(g, geodesic - alpha * s.xd));
  }
  return report;
}

}  // namespace nlgeom
