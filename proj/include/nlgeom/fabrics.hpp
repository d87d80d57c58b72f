#pragma once

/// Geometric fabrics: HD2 behaviour components, each paired with a Finsler
/// energy whose tensor sets its priority, energized so the energy is
/// conserved, combined by metric-weighted averaging and optionally forced by
/// a potential.
///
/// The component formulas below (walls, vortex, attractor) and the priority
/// weights are this library's own choices:
///   euclidean        h2 = 0,                                L_g = |xd|
///   wall_barrier     h2 = l |xd|^2 sum_f d/dx (k / d_f^2),  L_g = (1 + sum_f 1/d_f^2) |xd|
///   obstacle_barrier h2 = l |xd|^2 d/dx (k / phi^2),        L_g = (1 + 1/phi^2) |xd|
///   vortex           h2 = s |xd|^2 R90 grad b(x),           L_g = |xd|
///   attractor        h2 = g |xd|^2 (x - x*) / sqrt(|x - x*|^2 + eps^2),  L_g = |xd|
/// where d_f is the distance to box face f, phi the normalized obstacle
/// clearance, R90 a quarter turn and b a seeded sum of Gaussian bumps.

#include "nlgeom/finsler.hpp"
#include "nlgeom/geometry.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nlgeom {

struct FabricComponent {
  GeometryHandle geometry;
  FinslerStructure energy;  // energy field must be defined at xd = 0
  std::string label;
  /// Distance-like clearance to this component's barrier (> 0 outside), when it has one.
  std::function<double(const Vector&)> clearance;
};

struct Energized {
  double alpha = 0.0;
  Vector accel;
};

/// xdd = -h2 + alpha xd with alpha chosen so that d/dt L_e = xd^T (M_e xdd + f_e) = 0.
/// Below the velocity floor the desired acceleration is returned with alpha = 0.
Energized energize(const FabricComponent& c, const State& s);

struct Fabric {
  std::vector<FabricComponent> components;

  std::size_t dim() const { return components.empty() ? 0 : components.front().geometry.dim(); }
  /// Sum of component energy tensors.
  Matrix metric(const State& s) const;
  /// Sum of component energies.
  double energy(const State& s) const;
  /// Smallest clearance over barrier components (+inf without barriers).
  double min_clearance(const Vector& x) const;
};

/// (sum M_i)^{-1} sum M_i h2_i with h2_i the negated energized acceleration.
Vector combine(const Fabric& f, const State& s);

/// The combined field as a geometry handle.
GeometryHandle fabric_geometry(const Fabric& f);

struct ForcingTerm {
  ScalarField potential;  // depends on x only
  double damping = 0.0;   // B >= 0
};

/// xdd = -combine(f, s) - M^{-1} (d/dx psi + B xd)
Vector forced_acceleration(const Fabric& f, const ForcingTerm& t, const State& s);

/// psi(x) = gain |x - target|^2 / 2
ScalarField quadratic_potential(const Vector& target, double gain);

struct Box {
  Vector lower;
  Vector upper;
};

FabricComponent euclidean_component(std::size_t dim);
FabricComponent wall_barrier(const Box& box, double lambda, double k);
FabricComponent obstacle_barrier(const Vector& center, double radius, double lambda, double k);
/// 2-d only. `region` bounds where bump centers are drawn.
FabricComponent vortex(std::uint64_t seed, double strength, const Box& region, int bumps = 6);
FabricComponent attractor_geometry(const Vector& target, double gain, double smoothing = 0.5);

}  // namespace nlgeom
