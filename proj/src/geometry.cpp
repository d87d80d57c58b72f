#include "nlgeom/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace nlgeom {

Vector GeometryHandle::operator()(const State& s) const {
  const double speed = s.xd.norm();
  if (speed == 0.0 || speed <= velocity_floor_) return Vector::Zero(s.x.size());
  return h2_(s);
}

Vector project_perp(const Vector& xd, const Vector& v) {
  const double speed = xd.norm();
  if (speed == 0.0) throw DomainError("zero velocity", "projection orthogonal to a zero velocity is undefined");
  const Vector xhat = xd / speed;
  return v - xhat * xhat.dot(v);
}

HomogeneityReport check_homogeneity(const std::function<Vector(const State&)>& g, std::span<const State> samples,
                                    int degree) {
  HomogeneityReport report;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const State& s = samples[k];
    const Vector base = g(s);
    for (std::size_t i = 0; i < kHomogeneityScales.size(); ++i) {
      const double l = kHomogeneityScales[i];
      const Vector expected = std::pow(l, degree) * base;
      const Vector scaled = g(State(s.x, l * s.xd));
      const double violation = (scaled - expected).norm() / (1.0 + expected.norm());
      report.per_scale[i] = std::max(report.per_scale[i], violation);
      if (violation > report.max_violation) {
        report.max_violation = violation;
        report.worst_sample = k;
        report.worst_scale = l;
      }
    }
  }
  return report;
}

HomogeneityReport check_homogeneity(const GeometryHandle& g, std::span<const State> samples, int degree) {
  return check_homogeneity(std::function<Vector(const State&)>([&g](const State& s) { return g(s); }), samples,
                           degree);
}

Vector generating_acceleration(const GeometryHandle& g, const State& s) { return -g(s); }

Vector explicit_acceleration(const GeometryHandle& g, const State& s, double a) { return -g(s) - a * s.xd; }

Trajectory reparameterize(const Trajectory& traj, const AlphaProfile& a) {
  traj.validate();
  if (traj.empty()) throw ValidationError("cannot reparameterize an empty trajectory");
  const bool with_acc = !traj.accelerations.empty();

  Trajectory out;
  out.termination = traj.termination;
  out.times.reserve(traj.size());
  out.states.reserve(traj.size());
  std::vector<double> s_channel, rate_channel, alpha_channel;

  // y = (t, u) with u = dt/ds:  t' = u,  u' = -a(s) u
  double t = traj.times.front();
  double u = 1.0;
  auto emit = [&](std::size_t k) {
    if (!std::isfinite(u) || u < 1e-8 || u > 1e8) throw ReparameterizationError(traj.times[k], u);
    const State& s = traj.states[k];
    const double ak = a(traj.times[k]);
    out.times.push_back(t);
    out.states.emplace_back(s.x, s.xd / u);
    if (with_acc) out.accelerations.push_back((traj.accelerations[k] + ak * s.xd) / (u * u));
    s_channel.push_back(traj.times[k]);
    rate_channel.push_back(u);
    alpha_channel.push_back(-ak / u);
  };
  emit(0);
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double s0 = traj.times[k - 1];
    const double h = traj.times[k] - s0;
    const double a1 = a(s0), a2 = a(s0 + 0.5 * h), a4 = a(s0 + h);
    const double u1 = u;
    const double du1 = -a1 * u1;
    const double u2 = u + 0.5 * h * du1;
    const double du2 = -a2 * u2;
    const double u3 = u + 0.5 * h * du2;
    const double du3 = -a2 * u3;
    const double u4 = u + h * du3;
    const double du4 = -a4 * u4;
    t += h / 6.0 * (u1 + 2.0 * u2 + 2.0 * u3 + u4);
    u += h / 6.0 * (du1 + 2.0 * du2 + 2.0 * du3 + du4);
    emit(k);
  }
  for (const auto& [name, channel] : traj.diagnostics) out.diagnostics[name] = channel;
  out.diagnostics["s"] = std::move(s_channel);
  out.diagnostics["dt_ds"] = std::move(rate_channel);
  out.diagnostics["alpha_explicit"] = std::move(alpha_channel);
  return out;
}

double generating_residual(const GeometryHandle& g, const Trajectory& traj) {
  if (traj.accelerations.size() != traj.size()) throw ValidationError("trajectory carries no accelerations");
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vector h = g(traj.states[k]);
    worst = std::max(worst, (traj.accelerations[k] + h).norm() / (1.0 + h.norm()));
  }
  return worst;
}

double explicit_residual(const GeometryHandle& g, const Trajectory& traj, std::span<const double> alpha) {
  if (traj.accelerations.size() != traj.size()) throw ValidationError("trajectory carries no accelerations");
  if (alpha.size() != traj.size()) throw ValidationError("alpha channel length mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vector h = g(traj.states[k]);
    const Vector r = traj.accelerations[k] + h + alpha[k] * traj.states[k].xd;
    worst = std::max(worst, r.norm() / (1.0 + h.norm()));
  }
  return worst;
}

PathPolyline resample_path(const Trajectory& traj, std::size_t count) {
  if (traj.size() < 2) throw ValidationError("path needs at least two samples");
  if (count < 2) throw ValidationError("path resampling needs at least two points");
  std::vector<double> arc(traj.size(), 0.0);
  for (std::size_t k = 1; k < traj.size(); ++k)
    arc[k] = arc[k - 1] + (traj.states[k].x - traj.states[k - 1].x).norm();
  const double total = arc.back();
  if (!(total > 0.0)) throw ValidationError("path has zero length");

  PathPolyline out;
  out.total_length = total;
  out.points.reserve(count);
  std::size_t seg = 1;
  for (std::size_t i = 0; i < count; ++i) {
    const double target = total * static_cast<double>(i) / static_cast<double>(count - 1);
    while (seg < arc.size() - 1 && arc[seg] < target) ++seg;
    const double len = arc[seg] - arc[seg - 1];
    const double w = len > 0.0 ? std::clamp((target - arc[seg - 1]) / len, 0.0, 1.0) : 0.0;
    out.points.push_back((1.0 - w) * traj.states[seg - 1].x + w * traj.states[seg].x);
  }
  return out;
}

double path_distance(const Trajectory& a, const Trajectory& b, std::size_t count) {
  const PathPolyline pa = resample_path(a, count);
  const PathPolyline pb = resample_path(b, count);
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) worst = std::max(worst, (pa.points[i] - pb.points[i]).norm());
  return worst;
}

double CircleObstacle::phi(const Vector& q) const { return ((q - center).norm() - radius) / radius; }

Vector CircleObstacle::grad_phi(const Vector& q) const {
  const Vector d = q - center;
  const double dist = d.norm();
  if (dist == 0.0) throw DomainError("barrier penetration", "query at obstacle center");
  return d / (radius * dist);
}

GeometryHandle circle_barrier_geometry(const Vector& center, double radius, double lambda, double k) {
  if (!(radius > 0.0)) throw ValidationError("obstacle radius must be positive");
  if (!(lambda > 0.0) || !(k > 0.0)) throw ValidationError("barrier gains must be positive");
  CircleObstacle obstacle{center, radius};
  return GeometryHandle(
      static_cast<std::size_t>(center.size()),
      [obstacle, lambda, k](const State& s) -> Vector {
        const double phi = obstacle.phi(s.x);
        if (!(phi > 0.0)) throw DomainError("barrier penetration", "phi = " + std::to_string(phi));
        // d/dq (k / phi^2) = -2 k phi^-3 d/dq phi
        const Vector dpsi = (-2.0 * k / (phi * phi * phi)) * obstacle.grad_phi(s.x);
        return lambda * s.xd.squaredNorm() * dpsi;
      },
      "circle_barrier");
}

}  // namespace nlgeom
