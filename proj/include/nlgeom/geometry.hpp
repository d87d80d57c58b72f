#pragma once

/// Generalized nonlinear geometries (sprays): second-order systems
/// xdd + h2(x, xd) = 0 with h2 positively homogeneous of degree 2 in xd, whose
/// solutions trace speed-independent paths.

#include "nlgeom/errors.hpp"
#include "nlgeom/state.hpp"
#include "nlgeom/trajectory.hpp"

#include <array>
#include <functional>
#include <span>
#include <string>

namespace nlgeom {

/// An HD2 acceleration field h2. Evaluating at a velocity whose norm is at or
/// below `velocity_floor` returns zero (the stationary convention h2(x, 0) = 0).
class GeometryHandle {
 public:
  using Field = std::function<Vector(const State&)>;

  GeometryHandle() = default;
  GeometryHandle(std::size_t dim, Field h2, std::string name = {}, double velocity_floor = 0.0)
      : dim_(dim), h2_(std::move(h2)), name_(std::move(name)), velocity_floor_(velocity_floor) {}

  Vector operator()(const State& s) const;

  std::size_t dim() const { return dim_; }
  int declared_degree() const { return 2; }
  const std::string& name() const { return name_; }
  double velocity_floor() const { return velocity_floor_; }

 private:
  std::size_t dim_ = 0;
  Field h2_;
  std::string name_;
  double velocity_floor_ = 0.0;
};

/// v - xhat (xhat . v) with xhat = xd / |xd|. Throws DomainError for zero xd.
Vector project_perp(const Vector& xd, const Vector& v);

inline constexpr std::array<double, 3> kHomogeneityScales{0.5, 2.0, 7.3};

struct HomogeneityReport {
  double max_violation = 0.0;
  std::size_t worst_sample = 0;
  double worst_scale = 0.0;
  std::array<double, 3> per_scale{};  // max violation at each of kHomogeneityScales
};

/// max over samples and scales l of |g(x, l xd) - l^d g(x, xd)| / (1 + |l^d g(x, xd)|).
/// Works for any vector-valued function of the state (flatten matrices first).
HomogeneityReport check_homogeneity(const std::function<Vector(const State&)>& g, std::span<const State> samples,
                                    int degree);
HomogeneityReport check_homogeneity(const GeometryHandle& g, std::span<const State> samples, int degree);

/// xdd = -h2
Vector generating_acceleration(const GeometryHandle& g, const State& s);
/// xdd = -h2 - a xd
Vector explicit_acceleration(const GeometryHandle& g, const State& s, double a);

/// Smooth along-motion acceleration profile alpha(s).
using AlphaProfile = std::function<double(double)>;

class ReparameterizationError : public DomainError {
 public:
  ReparameterizationError(double s, double rate)
      : DomainError("reparameterization blow-up",
                    "dt/ds = " + std::to_string(rate) + " at s = " + std::to_string(s)),
        s_(s) {}
  double failing_s() const { return s_; }

 private:
  double s_;
};

/// Retimes a trajectory x_s(s) by integrating t'' + a(s) t' = 0 with
/// t(s0) = s0, t'(s0) = 1 along its samples. Positions are kept; velocities
/// become xd / t'. When the input carries accelerations they are transformed
/// by the chain rule to (acc + a xd) / t'^2. Adds channels "s", "dt_ds" and
/// "alpha_explicit" (= t'' / t'^2, the along-velocity coefficient the retimed
/// trajectory carries in explicit form).
Trajectory reparameterize(const Trajectory& traj, const AlphaProfile& a);

/// max_k |acc_k + h2(s_k)| / (1 + |h2(s_k)|) over a trajectory with accelerations.
double generating_residual(const GeometryHandle& g, const Trajectory& traj);
/// Same for xdd + h2 + alpha_k xd = 0 with alpha read from `alpha`.
double explicit_residual(const GeometryHandle& g, const Trajectory& traj, std::span<const double> alpha);

/// Path representative: positions resampled to uniform arc length.
struct PathPolyline {
  std::vector<Vector> points;
  double total_length = 0.0;
};

PathPolyline resample_path(const Trajectory& traj, std::size_t count);

/// Max pointwise distance between the two paths after resampling both to
/// `count` equidistant arc-length points.
double path_distance(const Trajectory& a, const Trajectory& b, std::size_t count = 2000);

/// Circular (spherical in n-d) obstacle with normalized clearance
/// phi(q) = (|q - center| - r) / r.
struct CircleObstacle {
  Vector center;
  double radius = 1.0;

  double phi(const Vector& q) const;
  Vector grad_phi(const Vector& q) const;
};

/// h2(q, qd) = lambda |qd|^2 d/dq psi(phi(q)) with psi(phi) = k / phi^2.
/// Evaluating at phi <= 0 throws DomainError.
GeometryHandle circle_barrier_geometry(const Vector& center, double radius, double lambda, double k);

}  // namespace nlgeom
