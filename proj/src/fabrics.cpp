#include "nlgeom/fabrics.hpp"

#include "nlgeom/lagrangian.hpp"
#include "nlgeom/linalg.hpp"
#include "nlgeom/random.hpp"

#include <cmath>
#include <limits>

namespace nlgeom {

namespace {

struct Weighted {
  Matrix metric;
  Vector h2;  // energized
};

Weighted evaluate_component(const FabricComponent& c, const State& s) {
  const EomTerms terms = eom_terms(c.energy.le, s);
  const Vector desired = -c.geometry(s);
  if (s.xd.norm() < kVelocityFloor) return {terms.mass, -desired};
  const double alpha = -s.xd.dot(terms.mass * desired + terms.force) / s.xd.dot(terms.mass * s.xd);
  return {terms.mass, -(desired + alpha * s.xd)};
}

struct Combined {
  Matrix metric;
  Vector h2;
};

Combined combine_all(const Fabric& f, const State& s) {
  if (f.components.empty()) throw ValidationError("fabric has no components");
  const auto n = s.x.size();
  Combined out{Matrix::Zero(n, n), Vector::Zero(n)};
  Vector weighted = Vector::Zero(n);
  for (const auto& c : f.components) {
    const Weighted w = evaluate_component(c, s);
    out.metric += w.metric;
    weighted += w.metric * w.h2;
  }
  out.h2 = solve_symmetric(out.metric, weighted, kMassConditionLimit);
  return out;
}

}  // namespace

Energized energize(const FabricComponent& c, const State& s) {
  const Vector desired = -c.geometry(s);
  if (s.xd.norm() < kVelocityFloor) return {0.0, desired};
  const EomTerms terms = eom_terms(c.energy.le, s);
  const double alpha = -s.xd.dot(terms.mass * desired + terms.force) / s.xd.dot(terms.mass * s.xd);
  return {alpha, desired + alpha * s.xd};
}

Matrix Fabric::metric(const State& s) const {
  Matrix m = Matrix::Zero(s.x.size(), s.x.size());
  for (const auto& c : components) m += evaluate_jet(c.energy.le, s).hess_xdxd();
  return m;
}

double Fabric::energy(const State& s) const {
  double e = 0.0;
  for (const auto& c : components) e += c.energy.le(s);
  return e;
}

double Fabric::min_clearance(const Vector& x) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : components)
    if (c.clearance) m = std::min(m, c.clearance(x));
  return m;
}

Vector combine(const Fabric& f, const State& s) { return combine_all(f, s).h2; }

GeometryHandle fabric_geometry(const Fabric& f) {
  return GeometryHandle(f.dim(), [f](const State& s) { return combine(f, s); }, "fabric");
}

Vector forced_acceleration(const Fabric& f, const ForcingTerm& t, const State& s) {
  const Combined c = combine_all(f, s);
  const Vector grad = evaluate_gradient(t.potential, s).grad_x();
  return -c.h2 - solve_symmetric(c.metric, grad + t.damping * s.xd, kMassConditionLimit);
}

ScalarField quadratic_potential(const Vector& target, double gain) {
  return ScalarField(
      static_cast<std::size_t>(target.size()),
      [target, gain](auto x, auto) {
        using T = scalar_of<decltype(x)>;
        T acc(0.0);
        for (std::size_t i = 0; i < x.size(); ++i) acc += square(x[i] - target[static_cast<Eigen::Index>(i)]);
        return 0.5 * gain * acc;
      },
      "quadratic_potential");
}

namespace {

// L_g = w(x) |xd| with the energy w^2 |xd|^2 / 2 written out so it stays
// differentiable at xd = 0.
template <class Weight>
FinslerStructure weighted_euclidean(std::size_t dim, Weight w, const std::string& name) {
  ScalarField lg(dim, [w](auto x, auto xd) { return w(x) * norm(xd); }, name);
  ScalarField le(dim, [w](auto x, auto xd) { return 0.5 * square(w(x)) * dot(xd, xd); }, name + "_energy");
  return make_finsler(std::move(lg), std::move(le), name);
}

void check_box(const Box& box) {
  if (box.lower.size() != box.upper.size() || box.lower.size() == 0)
    throw ValidationError("box corners must have equal, nonzero dimension");
  for (Eigen::Index i = 0; i < box.lower.size(); ++i)
    if (!(box.upper[i] > box.lower[i])) throw ValidationError("box has non-positive extent");
}

}  // namespace

FabricComponent euclidean_component(std::size_t dim) {
  FabricComponent c;
  c.label = "euclidean";
  c.geometry = GeometryHandle(dim, [dim](const State&) { return Vector::Zero(static_cast<Eigen::Index>(dim)); },
                              "euclidean");
  c.energy = weighted_euclidean(dim, [](auto) { return 1.0; }, "euclidean");
  return c;
}

FabricComponent wall_barrier(const Box& box, double lambda, double k) {
  check_box(box);
  if (!(lambda > 0.0) || !(k > 0.0)) throw ValidationError("wall barrier gains must be positive");
  const auto n = static_cast<std::size_t>(box.lower.size());
  FabricComponent c;
  c.label = "wall_barrier";
  c.geometry = GeometryHandle(
      n,
      [box, lambda, k](const State& s) -> Vector {
        Vector dpsi = Vector::Zero(s.x.size());
        for (Eigen::Index i = 0; i < s.x.size(); ++i) {
          const double lo = s.x[i] - box.lower[i];
          const double hi = box.upper[i] - s.x[i];
          if (!(lo > 0.0) || !(hi > 0.0)) throw DomainError("barrier penetration", "outside wall box");
          // d/dx k/d^2 = -2k/d^3 dd/dx, with dd/dx = +e_i (lower) or -e_i (upper)
          dpsi[i] += -2.0 * k / (lo * lo * lo) + 2.0 * k / (hi * hi * hi);
        }
        return lambda * s.xd.squaredNorm() * dpsi;
      },
      "wall_barrier");
  c.energy = weighted_euclidean(
      n,
      [box](auto x) {
        using T = scalar_of<decltype(x)>;
        T w(1.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
          const auto ii = static_cast<Eigen::Index>(i);
          w += 1.0 / square(x[i] - box.lower[ii]) + 1.0 / square(box.upper[ii] - x[i]);
        }
        return w;
      },
      "wall_barrier");
  c.clearance = [box](const Vector& x) {
    return std::min((x - box.lower).minCoeff(), (box.upper - x).minCoeff());
  };
  return c;
}

FabricComponent obstacle_barrier(const Vector& center, double radius, double lambda, double k) {
  FabricComponent c;
  c.label = "obstacle_barrier";
  c.geometry = circle_barrier_geometry(center, radius, lambda, k);
  const auto n = static_cast<std::size_t>(center.size());
  c.energy = weighted_euclidean(
      n,
      [center, radius](auto x) {
        using T = scalar_of<decltype(x)>;
        T d2(0.0);
        for (std::size_t i = 0; i < x.size(); ++i) d2 += square(x[i] - center[static_cast<Eigen::Index>(i)]);
        const T phi = (nlgeom::sqrt(d2) - radius) / radius;
        return 1.0 + 1.0 / (phi * phi);
      },
      "obstacle_barrier");
  const CircleObstacle obstacle{center, radius};
  c.clearance = [obstacle](const Vector& x) { return obstacle.phi(x); };
  return c;
}

FabricComponent vortex(std::uint64_t seed, double strength, const Box& region, int bumps) {
  check_box(region);
  if (region.lower.size() != 2) throw ValidationError("vortex geometry is defined in 2-d only");
  struct Bump {
    Vector center;
    double amplitude;
    double width;
  };
  Rng rng(seed);
  std::vector<Bump> field;
  for (int j = 0; j < bumps; ++j) {
    Vector center(2);
    center[0] = rng.uniform(region.lower[0], region.upper[0]);
    center[1] = rng.uniform(region.lower[1], region.upper[1]);
    const double amplitude = rng.uniform(-1.0, 1.0);
    const double width = rng.uniform(1.0, 2.0);
    field.push_back({center, amplitude, width});
  }
  FabricComponent c;
  c.label = "vortex";
  c.geometry = GeometryHandle(
      2,
      [field, strength](const State& s) -> Vector {
        Vector grad = Vector::Zero(2);
        for (const auto& b : field) {
          const Vector d = s.x - b.center;
          const double s2 = b.width * b.width;
          grad += b.amplitude * std::exp(-d.squaredNorm() / (2.0 * s2)) * (-d / s2);
        }
        Vector turned(2);
        turned << -grad[1], grad[0];
        return strength * s.xd.squaredNorm() * turned;
      },
      "vortex");
  c.energy = weighted_euclidean(2, [](auto) { return 1.0; }, "vortex");
  return c;
}

FabricComponent attractor_geometry(const Vector& target, double gain, double smoothing) {
  if (!(gain > 0.0) || !(smoothing > 0.0)) throw ValidationError("attractor gain and smoothing must be positive");
  const auto n = static_cast<std::size_t>(target.size());
  FabricComponent c;
  c.label = "attractor";
  c.geometry = GeometryHandle(
      n,
      [target, gain, smoothing](const State& s) -> Vector {
        const Vector d = s.x - target;
        return gain * s.xd.squaredNorm() * d / std::sqrt(d.squaredNorm() + smoothing * smoothing);
      },
      "attractor");
  c.energy = weighted_euclidean(n, [](auto) { return 1.0; }, "attractor");
  return c;
}

}  // namespace nlgeom
