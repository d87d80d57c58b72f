#include "nlgeom/riemann.hpp"

#include "nlgeom/linalg.hpp"

namespace nlgeom {

Matrix MetricField::operator()(const Vector& x) const {
  std::array<double, kMaxMetricDim * kMaxMetricDim> buf{};
  value_(std::span<const double>(x.data(), dim_), std::span<double>(buf.data(), dim_ * dim_));
  Matrix g(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = buf[i * dim_ + j];
  return g;
}

std::vector<Matrix> MetricField::derivatives(const Vector& x) const {
  std::array<HyperDual, kMaxMetricDim> xs{};
  std::array<HyperDual, kMaxMetricDim * kMaxMetricDim> buf{};
  for (std::size_t i = 0; i < dim_; ++i) xs[i] = HyperDual(x[static_cast<Eigen::Index>(i)]);
  std::vector<Matrix> out;
  out.reserve(dim_);
  for (std::size_t k = 0; k < dim_; ++k) {
    xs[k].a = 1.0;
    jet_(std::span<const HyperDual>(xs.data(), dim_), std::span<HyperDual>(buf.data(), dim_ * dim_));
    xs[k].a = 0.0;
    Matrix d(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = buf[i * dim_ + j].a;
    out.push_back(std::move(d));
  }
  return out;
}

namespace {

template <class T>
T quadratic_form(const MetricField& m, std::span<const T> x, std::span<const T> xd) {
  const std::size_t n = m.dim();
  std::array<T, kMaxMetricDim * kMaxMetricDim> g{};
  m(x, std::span<T>(g.data(), n * n));
  T q(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    T row(0.0);
    for (std::size_t j = 0; j < n; ++j) row += g[i * n + j] * xd[j];
    q += xd[i] * row;
  }
  return q;
}

}  // namespace

FinslerStructure riemannian_structure(const MetricField& m) {
  const std::string name = m.name().empty() ? "riemannian" : m.name();
  ScalarField lg(m.dim(), [m](auto x, auto xd) { return nlgeom::sqrt(quadratic_form(m, x, xd)); }, name);
  ScalarField le(m.dim(), [m](auto x, auto xd) { return 0.5 * quadratic_form(m, x, xd); }, name + "_energy");
  return make_finsler(std::move(lg), std::move(le), name);
}

Matrix closed_form_mg(const MetricField& m, const State& s) {
  const Matrix g = m(s.x);
  const Matrix root = sqrt_spd(g);
  const Vector v = root * s.xd;
  const double speed = v.norm();  // |xd|_G
  if (speed == 0.0) throw DomainError("zero velocity", "M_g is undefined at xd = 0");
  const Vector vhat = v / speed;
  const Matrix proj = Matrix::Identity(g.rows(), g.cols()) - vhat * vhat.transpose();
  return root * proj * root / speed;
}

Vector fictitious_force(const MetricField& m, const State& s) {
  const std::vector<Matrix> dg = m.derivatives(s.x);
  const auto n = static_cast<Eigen::Index>(m.dim());
  // d/dx(G xd) has column j = dG/dx_j xd
  Matrix jac(n, n);
  Vector grad(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Vector col = dg[static_cast<std::size_t>(k)] * s.xd;
    jac.col(k) = col;
    grad[k] = 0.5 * s.xd.dot(col);
  }
  return jac * s.xd - grad;
}

}  // namespace nlgeom
