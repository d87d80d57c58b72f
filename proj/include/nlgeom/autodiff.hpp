#pragma once

/// Forward-mode second-order differentiation over the 2n variables (x, xd).
///
/// A HyperDual carries a value plus two independent first-order perturbations
/// e1, e2 (e1^2 = e2^2 = 0) and their product e1*e2. Seeding e1 along variable
/// i and e2 along variable j and evaluating a field once yields
///   value, df/dz_i, df/dz_j, d2f/dz_i dz_j
/// exactly (up to rounding). evaluate_jet() sweeps every pair i <= j to
/// assemble the full gradient and Hessian.

#include "nlgeom/errors.hpp"
#include "nlgeom/state.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <type_traits>

namespace nlgeom {

struct HyperDual {
  double v = 0.0;   // value
  double a = 0.0;   // d/de1
  double b = 0.0;   // d/de2
  double ab = 0.0;  // d2/de1 de2

  constexpr HyperDual() = default;
  constexpr HyperDual(double value) : v(value) {}  // NOLINT: implicit promotion of constants
  constexpr HyperDual(double value, double da, double db, double dab) : v(value), a(da), b(db), ab(dab) {}

  constexpr bool has_derivative() const { return a != 0.0 || b != 0.0 || ab != 0.0; }

  HyperDual& operator+=(const HyperDual& o) {
    v += o.v; a += o.a; b += o.b; ab += o.ab;
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) {
    v -= o.v; a -= o.a; b -= o.b; ab -= o.ab;
    return *this;
  }
  HyperDual& operator*=(const HyperDual& o);
  HyperDual& operator/=(const HyperDual& o);
};

// Applies a scalar function with value f0, first derivative f1 and second
// derivative f2 (all taken at x.v) to a hyper-dual argument.
constexpr HyperDual chain(const HyperDual& x, double f0, double f1, double f2) {
  return {f0, f1 * x.a, f1 * x.b, f1 * x.ab + f2 * x.a * x.b};
}

constexpr HyperDual operator-(const HyperDual& x) { return {-x.v, -x.a, -x.b, -x.ab}; }
constexpr HyperDual operator+(const HyperDual& x, const HyperDual& y) {
  return {x.v + y.v, x.a + y.a, x.b + y.b, x.ab + y.ab};
}
constexpr HyperDual operator-(const HyperDual& x, const HyperDual& y) {
  return {x.v - y.v, x.a - y.a, x.b - y.b, x.ab - y.ab};
}
constexpr HyperDual operator*(const HyperDual& x, const HyperDual& y) {
  return {x.v * y.v, x.a * y.v + x.v * y.a, x.b * y.v + x.v * y.b,
          x.ab * y.v + x.a * y.b + x.b * y.a + x.v * y.ab};
}
HyperDual operator/(const HyperDual& x, const HyperDual& y);

inline HyperDual& HyperDual::operator*=(const HyperDual& o) { return *this = *this * o; }
inline HyperDual& HyperDual::operator/=(const HyperDual& o) { return *this = *this / o; }

HyperDual sqrt(const HyperDual& x);
HyperDual exp(const HyperDual& x);
HyperDual log(const HyperDual& x);
HyperDual tanh(const HyperDual& x);
HyperDual pow(const HyperDual& x, double p);

// Plain-double counterparts so generic field code can call nlgeom::sqrt(t)
// for either scalar type.
inline double sqrt(double x) { return std::sqrt(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double pow(double x, double p) { return std::pow(x, p); }

inline double value_of(double x) { return x; }
inline double value_of(const HyperDual& x) { return x.v; }

template <class T>
T square(const T& x) {
  return x * x;
}

template <class T>
T dot(std::span<const T> u, std::span<const T> w) {
  T acc(0.0);
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * w[i];
  return acc;
}

template <class T>
T norm(std::span<const T> u) {
  return nlgeom::sqrt(dot(u, u));
}

/// Element type of the spans handed to generic field code.
template <class Span>
using scalar_of = std::remove_cv_t<typename Span::element_type>;

/// A twice-differentiable scalar function of a State, evaluable both in plain
/// doubles and in hyper-dual arithmetic. Construct it from a generic callable
/// `f(std::span<const T> x, std::span<const T> xd) -> T`.
class ScalarField {
 public:
  using ValueFn = std::function<double(std::span<const double>, std::span<const double>)>;
  using JetFn = std::function<HyperDual(std::span<const HyperDual>, std::span<const HyperDual>)>;

  ScalarField() = default;

  template <class F>
    requires std::is_invocable_v<const F&, std::span<const double>, std::span<const double>> &&
             std::is_invocable_v<const F&, std::span<const HyperDual>, std::span<const HyperDual>>
  ScalarField(std::size_t dim, F f, std::string name = {})
      : dim_(dim),
        value_([f](std::span<const double> x, std::span<const double> xd) { return static_cast<double>(f(x, xd)); }),
        jet_([f](std::span<const HyperDual> x, std::span<const HyperDual> xd) { return HyperDual(f(x, xd)); }),
        name_(std::move(name)) {}

  ScalarField(std::size_t dim, ValueFn value, JetFn jet, std::string name = {})
      : dim_(dim), value_(std::move(value)), jet_(std::move(jet)), name_(std::move(name)) {}

  std::size_t dim() const { return dim_; }
  const std::string& name() const { return name_; }
  bool empty() const { return !value_; }

  double operator()(const State& s) const;
  double operator()(std::span<const double> x, std::span<const double> xd) const { return value_(x, xd); }
  HyperDual operator()(std::span<const HyperDual> x, std::span<const HyperDual> xd) const { return jet_(x, xd); }

  const ValueFn& value_fn() const { return value_; }
  const JetFn& jet_fn() const { return jet_; }

  ScalarField renamed(std::string name) const;

 private:
  std::size_t dim_ = 0;
  ValueFn value_;
  JetFn jet_;
  std::string name_;
};

ScalarField operator+(const ScalarField& f, const ScalarField& g);
ScalarField operator-(const ScalarField& f, const ScalarField& g);
ScalarField operator*(const ScalarField& f, const ScalarField& g);
ScalarField operator*(double c, const ScalarField& f);

/// Applies a generic unary function (callable on double and HyperDual) to a field.
template <class U>
ScalarField transform(const ScalarField& f, U u, std::string name = {}) {
  auto vf = f.value_fn();
  auto jf = f.jet_fn();
  return ScalarField(
      f.dim(),
      [vf, u](std::span<const double> x, std::span<const double> xd) { return static_cast<double>(u(vf(x, xd))); },
      [jf, u](std::span<const HyperDual> x, std::span<const HyperDual> xd) { return HyperDual(u(jf(x, xd))); },
      std::move(name));
}

/// Value, gradient and Hessian of a scalar field over z = [x | xd].
struct Jet2 {
  std::size_t n = 0;
  double value = 0.0;
  Vector gradient;  // length 2n
  Matrix hessian;   // 2n x 2n, symmetric

  Vector grad_x() const { return gradient.head(n); }
  Vector grad_xd() const { return gradient.tail(n); }
  Matrix hess_xx() const { return hessian.topLeftCorner(n, n); }
  /// rows x, columns xd
  Matrix hess_xxd() const { return hessian.topRightCorner(n, n); }
  /// rows xd, columns x
  Matrix hess_xdx() const { return hessian.bottomLeftCorner(n, n); }
  Matrix hess_xdxd() const { return hessian.bottomRightCorner(n, n); }
};

/// Product rule on jets: jet(f * g) from jet(f) and jet(g).
Jet2 operator*(const Jet2& f, const Jet2& g);
/// Chain rule on jets: jet(phi o f) given phi(f.value), phi', phi''.
Jet2 compose(const Jet2& f, double phi, double dphi, double d2phi);

/// Exact value, gradient and Hessian by n(2n+1) hyper-dual sweeps.
/// Throws DomainError when the field hits a singular sub-expression.
Jet2 evaluate_jet(const ScalarField& f, const State& s);

/// First-order only: value and gradient (2n sweeps). The Hessian is left empty.
Jet2 evaluate_gradient(const ScalarField& f, const State& s);

/// Central-difference estimate of gradient and Hessian.
Jet2 finite_difference_jet(const ScalarField& f, const State& s, double step);

}  // namespace nlgeom
