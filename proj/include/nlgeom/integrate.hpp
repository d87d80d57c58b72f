#pragma once

#include "nlgeom/autodiff.hpp"
#include "nlgeom/trajectory.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nlgeom {

/// Acceleration of a second-order system, possibly time dependent.
using Acceleration = std::function<Vector(double t, const State&)>;
using AutonomousAcceleration = std::function<Vector(const State&)>;

struct TargetBall {
  Vector center;
  double radius = 0.0;
};

/// Halts integration once the named probe channel drops to `margin` or below.
struct BarrierMargin {
  std::string channel = "min_phi";
  double margin = 0.0;
};

struct IntegratorConfig {
  enum class Method { rk4 };

  double step = 1e-3;
  double horizon = 1.0;
  Method method = Method::rk4;
  std::optional<TargetBall> target_ball;
  std::optional<double> max_speed;
  std::optional<BarrierMargin> barrier_margin;

  void validate() const;
};

struct Probe {
  std::string name;
  std::function<double(const State&)> fn;
};

/// Classical fixed-step RK4 on the first-order lift (x, xd). The last step is
/// shortened so the final sample lands on the horizon. Probes and
/// accelerations are recorded at accepted states only. An exception thrown by
/// the acceleration or a probe ends integration with StopReason::aborted and
/// the partial trajectory.
Trajectory integrate(const Acceleration& accel, const State& s0, const IntegratorConfig& cfg,
                     const std::vector<Probe>& probes = {});
Trajectory integrate(const AutonomousAcceleration& accel, const State& s0, const IntegratorConfig& cfg,
                     const std::vector<Probe>& probes = {});

/// max_k |le(s_k) - le(s_0)| / max(le(s_0), 1e-12)
double energy_drift(const Trajectory& traj, const ScalarField& le);
double energy_drift(const Trajectory& traj, const std::function<double(const State&)>& energy);

struct OrderEstimate {
  bool exact = false;   // all step sizes agree to rounding
  double order = 0.0;   // log2 of successive endpoint-difference ratio
  double coarse_difference = 0.0;
  double fine_difference = 0.0;
};

/// Runs at h, h/factor and h/factor^2 and estimates the observed convergence
/// order from the endpoint differences (Richardson ratio).
OrderEstimate refine_and_compare(const AutonomousAcceleration& accel, const State& s0, const IntegratorConfig& cfg,
                                 double factor = 2.0);

}  // namespace nlgeom
