#include "nlgeom/linalg.hpp"

#include "nlgeom/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <limits>

namespace nlgeom {

namespace {

double condition_of(const Vector& eigenvalues) {
  const double hi = eigenvalues.cwiseAbs().maxCoeff();
  const double lo = eigenvalues.cwiseAbs().minCoeff();
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace

double condition_number(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
  return condition_of(es.eigenvalues());
}

Vector solve_symmetric(const Matrix& symmetric, const Vector& rhs, double max_condition) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric);
  const double cond = condition_of(es.eigenvalues());
  if (!(cond < max_condition)) throw SingularMassError(cond);
  const Matrix& v = es.eigenvectors();
  return v * ((v.transpose() * rhs).array() / es.eigenvalues().array()).matrix();
}

Matrix inverse_symmetric(const Matrix& symmetric, double max_condition) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric);
  const double cond = condition_of(es.eigenvalues());
  if (!(cond < max_condition)) throw SingularMassError(cond);
  const Matrix& v = es.eigenvectors();
  return v * es.eigenvalues().cwiseInverse().asDiagonal() * v.transpose();
}

Matrix sqrt_spd(const Matrix& spd) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(spd);
  if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0))
    throw DomainError("non-SPD metric", "square root requires a positive definite matrix");
  const Matrix& v = es.eigenvectors();
  return v * es.eigenvalues().cwiseSqrt().asDiagonal() * v.transpose();
}

double mixed_error(const Matrix& a, const Matrix& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / (1.0 + scale);
}

int numerical_rank(const Matrix& m, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * s[0]) ++rank;
  return rank;
}

}  // namespace nlgeom
