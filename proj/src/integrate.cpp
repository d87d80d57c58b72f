#include "nlgeom/integrate.hpp"

#include "nlgeom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace nlgeom {

void IntegratorConfig::validate() const {
  if (!(step > 0.0)) throw ValidationError("integrator step must be positive");
  if (!(horizon > 0.0)) throw ValidationError("integrator horizon must be positive");
  if (step > horizon) throw ValidationError("integrator step exceeds horizon");
  if (target_ball && !(target_ball->radius > 0.0)) throw ValidationError("target ball radius must be positive");
  if (max_speed && !(*max_speed > 0.0)) throw ValidationError("max speed must be positive");
}

namespace {

struct Recorder {
  Trajectory& traj;
  const std::vector<Probe>& probes;

  void record(double t, const State& s, const Vector& a) {
    std::vector<double> values;
    values.reserve(probes.size());
    for (const auto& p : probes) values.push_back(p.fn(s));
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.accelerations.push_back(a);
    for (std::size_t i = 0; i < probes.size(); ++i) traj.diagnostics[probes[i].name].push_back(values[i]);
  }
};

std::optional<StopReason> stop_requested(const IntegratorConfig& cfg, const Trajectory& traj) {
  const State& s = traj.states.back();
  if (cfg.target_ball && (s.x - cfg.target_ball->center).norm() <= cfg.target_ball->radius)
    return StopReason::target_reached;
  if (cfg.max_speed && s.xd.norm() > *cfg.max_speed) return StopReason::max_speed;
  if (cfg.barrier_margin) {
    auto it = traj.diagnostics.find(cfg.barrier_margin->channel);
    if (it != traj.diagnostics.end() && it->second.back() <= cfg.barrier_margin->margin)
      return StopReason::barrier_margin;
  }
  return std::nullopt;
}

}  // namespace

Trajectory integrate(const Acceleration& accel, const State& s0, const IntegratorConfig& cfg,
                     const std::vector<Probe>& probes) {
  cfg.validate();
  if (s0.x.size() != s0.xd.size()) throw ValidationError("initial state position/velocity size mismatch");

  Trajectory traj;
  for (const auto& p : probes) traj.diagnostics[p.name];
  Recorder rec{traj, probes};

  const double h = cfg.step;
  const auto steps = static_cast<long>(std::ceil(cfg.horizon / h - 1e-9));
  double t = 0.0;
  State s = s0;
  Vector a;
  try {
    a = accel(t, s);
    rec.record(t, s, a);
  } catch (const std::exception& e) {
    traj.termination = {StopReason::aborted, t, e.what()};
    return traj;
  }
  if (auto why = stop_requested(cfg, traj)) {
    traj.termination = {*why, t, {}};
    return traj;
  }

  for (long k = 1; k <= steps; ++k) {
    const double t_next = k == steps ? cfg.horizon : static_cast<double>(k) * h;
    const double dt = t_next - t;
    try {
      // k1 = (v, a) at the accepted state, reused from the previous step.
      const Vector& v1 = s.xd;
      const Vector& a1 = a;
      const State s2(s.x + 0.5 * dt * v1, s.xd + 0.5 * dt * a1);
      const Vector a2 = accel(t + 0.5 * dt, s2);
      const State s3(s.x + 0.5 * dt * s2.xd, s.xd + 0.5 * dt * a2);
      const Vector a3 = accel(t + 0.5 * dt, s3);
      const State s4(s.x + dt * s3.xd, s.xd + dt * a3);
      const Vector a4 = accel(t + dt, s4);
      State next(s.x + dt / 6.0 * (v1 + 2.0 * s2.xd + 2.0 * s3.xd + s4.xd),
                 s.xd + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4));
      Vector a_next = accel(t_next, next);
      rec.record(t_next, next, a_next);
      s = std::move(next);
      a = std::move(a_next);
      t = t_next;
    } catch (const std::exception& e) {
      traj.termination = {StopReason::aborted, t, e.what()};
      return traj;
    }
    if (auto why = stop_requested(cfg, traj)) {
      traj.termination = {*why, t, {}};
      return traj;
    }
  }
  traj.termination = {StopReason::completed, t, {}};
  return traj;
}

Trajectory integrate(const AutonomousAcceleration& accel, const State& s0, const IntegratorConfig& cfg,
                     const std::vector<Probe>& probes) {
  return integrate(Acceleration([accel](double, const State& s) { return accel(s); }), s0, cfg, probes);
}

double energy_drift(const Trajectory& traj, const std::function<double(const State&)>& energy) {
  if (traj.empty()) throw ValidationError("energy drift of an empty trajectory");
  const double e0 = energy(traj.states.front());
  const double scale = std::max(e0, 1e-12);
  double worst = 0.0;
  for (const auto& s : traj.states) worst = std::max(worst, std::abs(energy(s) - e0) / scale);
  return worst;
}

double energy_drift(const Trajectory& traj, const ScalarField& le) {
  return energy_drift(traj, [&le](const State& s) { return le(s); });
}

OrderEstimate refine_and_compare(const AutonomousAcceleration& accel, const State& s0, const IntegratorConfig& cfg,
                                 double factor) {
  auto endpoint = [&](double h) {
    IntegratorConfig c = cfg;
    c.step = h;
    c.target_ball.reset();
    c.max_speed.reset();
    c.barrier_margin.reset();
    const Trajectory tr = integrate(accel, s0, c);
    if (tr.aborted()) throw DomainError("integration aborted", tr.termination.message);
    const State& s = tr.states.back();
    Vector y(2 * s.x.size());
    y << s.x, s.xd;
    return y;
  };
  const Vector y0 = endpoint(cfg.step);
  const Vector y1 = endpoint(cfg.step / factor);
  const Vector y2 = endpoint(cfg.step / (factor * factor));

  OrderEstimate est;
  est.coarse_difference = (y0 - y1).norm();
  est.fine_difference = (y1 - y2).norm();
  const double noise = 1e-13 * (1.0 + y2.norm());
  if (est.coarse_difference <= noise) {
    est.exact = true;
    return est;
  }
  est.order = std::log(est.coarse_difference / std::max(est.fine_difference, 1e-300)) / std::log(factor);
  return est;
}

}  // namespace nlgeom
