#pragma once

#include "nlgeom/autodiff.hpp"
#include "nlgeom/trajectory.hpp"

namespace nlgeom {

/// Euler-Lagrange equation in expanded form: mass * xdd + force = 0 with
/// mass = d2L/dxd dxd and force = (d2L/dxd dx) xd - dL/dx.
struct EomTerms {
  Matrix mass;
  Vector force;
};

/// Mass matrices with a condition estimate at or above this are treated as
/// rank deficient.
inline constexpr double kMassConditionLimit = 1e12;

EomTerms eom_terms(const ScalarField& lagrangian, const State& s);

/// xdd = -mass^{-1} force. Throws SingularMassError for ill-conditioned mass.
Vector solved_acceleration(const EomTerms& terms);

/// dL/dxd . xd - L
double hamiltonian(const ScalarField& lagrangian, const State& s);

/// Composite trapezoid integral of L over the trajectory samples.
double action(const ScalarField& lagrangian, const Trajectory& traj);

}  // namespace nlgeom
