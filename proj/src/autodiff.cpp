#include "nlgeom/autodiff.hpp"

#include <vector>

namespace nlgeom {

HyperDual operator/(const HyperDual& x, const HyperDual& y) {
  if (y.v == 0.0) throw DomainError("division by zero", "denominator evaluates to 0");
  const double inv = 1.0 / y.v;
  return x * chain(y, inv, -inv * inv, 2.0 * inv * inv * inv);
}

HyperDual sqrt(const HyperDual& x) {
  if (x.v < 0.0) throw DomainError("sqrt of negative", "argument " + std::to_string(x.v));
  if (x.v == 0.0) {
    if (x.has_derivative()) throw DomainError("sqrt at zero", "derivative of sqrt is unbounded at 0");
    return {};
  }
  const double r = std::sqrt(x.v);
  return chain(x, r, 0.5 / r, -0.25 / (r * x.v));
}

HyperDual exp(const HyperDual& x) {
  const double e = std::exp(x.v);
  return chain(x, e, e, e);
}

HyperDual log(const HyperDual& x) {
  if (x.v <= 0.0) throw DomainError("log of non-positive", "argument " + std::to_string(x.v));
  const double inv = 1.0 / x.v;
  return chain(x, std::log(x.v), inv, -inv * inv);
}

HyperDual tanh(const HyperDual& x) {
  const double t = std::tanh(x.v);
  const double d1 = 1.0 - t * t;
  return chain(x, t, d1, -2.0 * t * d1);
}

HyperDual pow(const HyperDual& x, double p) {
  if (p == 0.0) return HyperDual(1.0);
  if (p == 1.0) return x;
  const bool integral = std::trunc(p) == p;
  if (x.v < 0.0 && !integral) throw DomainError("pow of negative base", "non-integer exponent " + std::to_string(p));
  if (x.v == 0.0) {
    if (p < 0.0) throw DomainError("division by zero", "negative power of 0");
    if (p < 2.0 && x.has_derivative()) throw DomainError("pow at zero", "derivative unbounded at 0");
  }
  const double f0 = std::pow(x.v, p);
  const double f1 = p * std::pow(x.v, p - 1.0);
  const double f2 = p * (p - 1.0) * (p == 2.0 ? 1.0 : std::pow(x.v, p - 2.0));
  return chain(x, f0, f1, f2);
}

double ScalarField::operator()(const State& s) const {
  return value_(std::span<const double>(s.x.data(), s.dim()), std::span<const double>(s.xd.data(), s.dim()));
}

ScalarField ScalarField::renamed(std::string name) const {
  ScalarField out = *this;
  out.name_ = std::move(name);
  return out;
}

namespace {

template <class Op>
ScalarField binary(const ScalarField& f, const ScalarField& g, Op op) {
  if (f.dim() != g.dim()) throw ValidationError("field dimension mismatch");
  auto fv = f.value_fn(), gv = g.value_fn();
  auto fj = f.jet_fn(), gj = g.jet_fn();
  return ScalarField(
      f.dim(),
      [fv, gv, op](std::span<const double> x, std::span<const double> xd) { return op(fv(x, xd), gv(x, xd)); },
      [fj, gj, op](std::span<const HyperDual> x, std::span<const HyperDual> xd) { return op(fj(x, xd), gj(x, xd)); });
}

}  // namespace

ScalarField operator+(const ScalarField& f, const ScalarField& g) {
  return binary(f, g, [](const auto& a, const auto& b) { return a + b; });
}
ScalarField operator-(const ScalarField& f, const ScalarField& g) {
  return binary(f, g, [](const auto& a, const auto& b) { return a - b; });
}
ScalarField operator*(const ScalarField& f, const ScalarField& g) {
  return binary(f, g, [](const auto& a, const auto& b) { return a * b; });
}
ScalarField operator*(double c, const ScalarField& f) {
  return transform(f, [c](const auto& a) { return c * a; }, f.name());
}

Jet2 operator*(const Jet2& f, const Jet2& g) {
  Jet2 out;
  out.n = f.n;
  out.value = f.value * g.value;
  out.gradient = f.value * g.gradient + g.value * f.gradient;
  out.hessian = f.value * g.hessian + g.value * f.hessian + f.gradient * g.gradient.transpose() +
                g.gradient * f.gradient.transpose();
  return out;
}

Jet2 compose(const Jet2& f, double phi, double dphi, double d2phi) {
  Jet2 out;
  out.n = f.n;
  out.value = phi;
  out.gradient = dphi * f.gradient;
  out.hessian = dphi * f.hessian + d2phi * f.gradient * f.gradient.transpose();
  return out;
}

namespace {

// Hyper-dual copies of z = [x | xd] reused across sweeps.
struct Seeds {
  std::vector<HyperDual> z;
  std::size_t n;

  Seeds(const State& s) : z(2 * s.dim()), n(s.dim()) {
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = HyperDual(s.x[static_cast<Eigen::Index>(i)]);
      z[n + i] = HyperDual(s.xd[static_cast<Eigen::Index>(i)]);
    }
  }

  HyperDual eval(const ScalarField& f) const {
    return f(std::span<const HyperDual>(z.data(), n), std::span<const HyperDual>(z.data() + n, n));
  }
};

void check_dim(const ScalarField& f, const State& s) {
  if (s.x.size() != s.xd.size() || s.dim() != f.dim())
    throw ValidationError("state dimension " + std::to_string(s.dim()) + " does not match field arity " +
                          std::to_string(f.dim()));
}

}  // namespace

Jet2 evaluate_jet(const ScalarField& f, const State& s) {
  check_dim(f, s);
  const std::size_t n = s.dim();
  const auto m = static_cast<Eigen::Index>(2 * n);
  Seeds seeds(s);
  Jet2 out;
  out.n = n;
  out.gradient = Vector::Zero(m);
  out.hessian = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      seeds.z[static_cast<std::size_t>(i)].a = 1.0;
      seeds.z[static_cast<std::size_t>(j)].b = 1.0;
      const HyperDual r = seeds.eval(f);
      seeds.z[static_cast<std::size_t>(i)].a = 0.0;
      seeds.z[static_cast<std::size_t>(j)].b = 0.0;
      if (i == j) {
        out.gradient[i] = r.a;
        out.value = r.v;
      }
      out.hessian(i, j) = r.ab;
      out.hessian(j, i) = r.ab;
    }
  }
  return out;
}

Jet2 evaluate_gradient(const ScalarField& f, const State& s) {
  check_dim(f, s);
  const std::size_t n = s.dim();
  const auto m = static_cast<Eigen::Index>(2 * n);
  Seeds seeds(s);
  Jet2 out;
  out.n = n;
  out.gradient = Vector::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    seeds.z[static_cast<std::size_t>(i)].a = 1.0;
    const HyperDual r = seeds.eval(f);
    seeds.z[static_cast<std::size_t>(i)].a = 0.0;
    out.gradient[i] = r.a;
    out.value = r.v;
  }
  if (m == 0) out.value = f(s);
  return out;
}

Jet2 finite_difference_jet(const ScalarField& f, const State& s, double step) {
  check_dim(f, s);
  if (!(step > 0.0)) throw ValidationError("finite-difference step must be positive");
  const std::size_t n = s.dim();
  const auto m = static_cast<Eigen::Index>(2 * n);
  Vector z(m);
  z << s.x, s.xd;
  auto eval = [&](const Vector& p) {
    return f(std::span<const double>(p.data(), n), std::span<const double>(p.data() + n, n));
  };

  Jet2 out;
  out.n = n;
  out.value = eval(z);
  out.gradient = Vector::Zero(m);
  out.hessian = Matrix::Zero(m, m);
  const double h = step;
  for (Eigen::Index i = 0; i < m; ++i) {
    Vector p = z, q = z;
    p[i] += h;
    q[i] -= h;
    const double fp = eval(p), fq = eval(q);
    out.gradient[i] = (fp - fq) / (2.0 * h);
    out.hessian(i, i) = (fp - 2.0 * out.value + fq) / (h * h);
    for (Eigen::Index j = i + 1; j < m; ++j) {
      Vector pp = z, pq = z, qp = z, qq = z;
      pp[i] += h; pp[j] += h;
      pq[i] += h; pq[j] -= h;
      qp[i] -= h; qp[j] += h;
      qq[i] -= h; qq[j] -= h;
      const double hij = (eval(pp) - eval(pq) - eval(qp) + eval(qq)) / (4.0 * h * h);
      out.hessian(i, j) = hij;
      out.hessian(j, i) = hij;
    }
  }
  return out;
}

}  // namespace nlgeom
