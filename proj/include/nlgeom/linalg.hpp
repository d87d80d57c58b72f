#pragma once

#include "nlgeom/state.hpp"

namespace nlgeom {

/// Ratio of largest to smallest absolute eigenvalue of a symmetric matrix
/// (infinity when the smallest is exactly zero).
double condition_number(const Matrix& symmetric);

/// Solves symmetric * y = rhs, refusing when the condition estimate reaches
/// `max_condition`. Throws SingularMassError carrying the estimate.
Vector solve_symmetric(const Matrix& symmetric, const Vector& rhs, double max_condition);

/// Inverse of a symmetric matrix with the same conditioning guard.
Matrix inverse_symmetric(const Matrix& symmetric, double max_condition);

/// Symmetric square root via eigendecomposition. Throws DomainError when the
/// matrix is not positive definite.
Matrix sqrt_spd(const Matrix& spd);

/// ||a - b||_inf / (1 + max(||a||_inf, ||b||_inf)): relative for large
/// quantities, absolute near zero.
double mixed_error(const Matrix& a, const Matrix& b);

/// Numerical rank with singular values below rel_tol * sigma_max treated as zero.
int numerical_rank(const Matrix& m, double rel_tol);

}  // namespace nlgeom
