#pragma once

/// Finsler structures L_g (nonnegative, HD1 in velocity, invertible energy
/// tensor away from xd = 0) and their energies L_e = L_g^2 / 2.

#include "nlgeom/autodiff.hpp"
#include "nlgeom/geometry.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace nlgeom {

/// Below this speed Finsler quantities are not evaluated; geometry handles
/// return zero instead.
inline constexpr double kVelocityFloor = 1e-9;
/// Axiom-3 bound on the energy tensor condition number.
inline constexpr double kEnergyTensorConditionLimit = 1e10;

struct FinslerStructure {
  ScalarField lg;  // structure
  ScalarField le;  // energy
  std::size_t dim = 0;
  std::string name;
};

/// Builds L_e = L_g^2 / 2 by composition at the field level. No validation.
FinslerStructure make_finsler(ScalarField lg, std::string name = {});
/// Same, with an energy supplied in closed form (it must equal L_g^2 / 2).
FinslerStructure make_finsler(ScalarField lg, ScalarField le, std::string name = {});

struct FinslerReport {
  double positivity_violation = 0.0;  // max(0, -L_g); 1 for L_g = 0 at nonzero xd
  HomogeneityReport homogeneity;      // L_g checked at degree 1
  double max_condition = 0.0;         // worst energy-tensor condition number
  std::size_t worst_condition_sample = 0;

  bool positivity_ok() const { return positivity_violation == 0.0; }
  bool homogeneity_ok(double tol = 1e-10) const { return homogeneity.max_violation <= tol; }
  bool invertibility_ok() const { return max_condition < kEnergyTensorConditionLimit; }
  bool ok() const { return positivity_ok() && homogeneity_ok() && invertibility_ok(); }
};

/// Sampled axiom check. Positivity is probed at each sample, its velocity
/// reversal and at zero velocity. Failures are reported, never thrown.
FinslerReport validate_finsler(const FinslerStructure& f, std::span<const State> samples);

struct EnergyTerms {
  Matrix me;  // energy tensor d2L_e/dxd dxd
  Vector fe;  // energy force
  Vector pe;  // generalized momentum dL_e/dxd
  double le = 0.0;
};

/// Throws DomainError below the velocity floor.
EnergyTerms energy_terms(const FinslerStructure& f, const State& s);

struct MomentumIdentityErrors {
  double momentum = 0.0;  // |p_e - M_e xd| / |p_e|
  double energy = 0.0;    // max pairwise spread of the four energy expressions / L_e
};

/// p_e = M_e xd and L_e = p_e.xd/2 = xd.M_e xd/2 = p_e.M_e^{-1} p_e/2.
MomentumIdentityErrors momentum_identity_errors(const EnergyTerms& e, const Vector& xd);

/// h2 = M_e^{-1} f_e (zero below the velocity floor). Throws
/// SingularMassError if the energy tensor loses invertibility.
GeometryHandle geodesic_geometry(const FinslerStructure& f);

struct GeometricTerms {
  double lg = 0.0;
  Matrix mg;         // d2L_g/dxd dxd by differentiation of L_g
  Vector fg;         // (d2L_g/dxd dx) xd - dL_g/dx
  Matrix rxd;        // M_e - p_e p_e^T / (p_e^T M_e^{-1} p_e)
  Matrix rpe;        // M_e^{-1} - xd xd^T / (xd^T M_e xd)
  Matrix mg_closed;  // R_xd / L_g
  Vector fg_closed;  // M_e R_pe f_e / L_g
  double route_error = 0.0;  // max mixed error between the two routes
};

/// Computes M_g, f_g by differentiating L_g and again from the energy terms
/// in closed form. Throws DomainError at the xd = 0 cusp.
GeometricTerms geometric_terms(const FinslerStructure& f, const State& s);

/// |M_g xdd + f_g|_inf / (1 + |f_g|_inf)
double geometric_residual(const GeometricTerms& g, const Vector& xdd);

struct Theorem2Report {
  double max_residual = 0.0;       // geometric equation residual over sampled alpha
  double route_error = 0.0;        // autodiff vs closed form M_g, f_g
  double identity_error = 0.0;     // M_e R_pe M_e vs R_xd
  double null_residual = 0.0;      // |M_g xd| / (|M_g| |xd|)
  double orthogonality = 0.0;      // |f_g . xd| / (|xd| (|f_g| + 1e-12))

  bool ok(double tol = 1e-8) const {
    return max_residual <= tol && route_error <= tol && identity_error <= tol && null_residual <= tol &&
           orthogonality <= tol;
  }
};

/// Checks that every member xdd = -M_e^{-1} f_e - alpha xd of the explicit
/// family satisfies M_g xdd + f_g = 0 (alpha = 0 plus `trials` seeded draws
/// from [-5, 5]), together with the structural identities behind it.
Theorem2Report verify_theorem2(const FinslerStructure& f, const State& s, std::size_t trials,
                               std::uint64_t seed = 1);

}  // namespace nlgeom
