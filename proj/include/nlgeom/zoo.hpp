#pragma once

/// Reference metrics, structures and fields shared by the property suites.

#include "nlgeom/finsler.hpp"
#include "nlgeom/riemann.hpp"

#include <cstdint>
#include <vector>

namespace nlgeom::zoo {

MetricField identity_metric(std::size_t n);
/// diag(1 + x_1^2, 1) in 2-d.
MetricField axis_metric();
/// A(x)^T A(x) + eps I with A quadratic in x and coefficients drawn from `seed`.
MetricField dense_metric(std::size_t n, std::uint64_t seed, double eps = 1e-3);

FinslerStructure euclidean(std::size_t n);
/// |xd| (1 + 0.5 tanh(x_1)), energy formed by squaring.
FinslerStructure conformal();
/// sqrt(xd^T G xd) + b(x)^T xd with |b| < 1/2 and G >= I.
FinslerStructure randers();
/// c(x) sqrt(|xd|^2 + 0.2 sum xd_i^4 / |xd|^2): direction-dependent energy tensor.
FinslerStructure quartic();

/// Five Riemannian-family and two non-Riemannian structures in 2-d.
std::vector<FinslerStructure> structures();

/// Scalar fields for derivative cross-checks (structures, energies, a
/// degree-4 polynomial in 4 variables and a few compositions).
std::vector<ScalarField> fields();

/// Random degree-4 polynomial over (x1, x2, xd1, xd2) with coefficients in [-1, 1] / 8.
ScalarField random_polynomial(std::uint64_t seed);

}  // namespace nlgeom::zoo
