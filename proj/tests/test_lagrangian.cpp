#include "nlgeom/finsler.hpp"
#include "nlgeom/geometry.hpp"
#include "nlgeom/integrate.hpp"
#include "nlgeom/lagrangian.hpp"
#include "nlgeom/linalg.hpp"
#include "nlgeom/random.hpp"
#include "nlgeom/zoo.hpp"

#include <doctest.h>

#include <cmath>

using namespace nlgeom;

namespace {

State planar(double x, double y, double vx, double vy) {
  Vector a(2), b(2);
  a << x, y;
  b << vx, vy;
  return {a, b};
}

Trajectory sampled(const std::vector<double>& times, const std::function<State(double)>& at) {
  Trajectory t;
  for (double s : times) {
    t.times.push_back(s);
    t.states.push_back(at(s));
  }
  return t;
}

}  // namespace

TEST_CASE("free particle") {
  const ScalarField kinetic(2, [](auto, auto xd) { return 0.5 * dot(xd, xd); });
  const auto terms = eom_terms(kinetic, planar(0.4, 2.0, -1.0, 0.5));
  CHECK((terms.mass - Matrix::Identity(2, 2)).norm() == 0.0);
  CHECK(terms.force.norm() == 0.0);
}

TEST_CASE("axis-varying metric: mass and force by hand") {
  // f = d/dx(G xd) xd - d/dx(xd^T G xd / 2) = (2 x1 xd1^2, 0) - (x1 xd1^2, 0) = (1, 0) at x1 = xd1 = 1
  const ScalarField l(2, [](auto x, auto xd) { return 0.5 * ((1.0 + x[0] * x[0]) * xd[0] * xd[0] + xd[1] * xd[1]); });
  const auto terms = eom_terms(l, planar(1, 0, 1, 1));
  CHECK(terms.mass(0, 0) == doctest::Approx(2.0));
  CHECK(terms.mass(1, 1) == doctest::Approx(1.0));
  CHECK(terms.mass(0, 1) == 0.0);
  CHECK(terms.force[0] == doctest::Approx(1.0));
  CHECK(terms.force[1] == doctest::Approx(0.0));
}

TEST_CASE("translation-invariant Lagrangians have no force") {
  const ScalarField l(2, [](auto, auto xd) { return nlgeom::pow(1.0 + dot(xd, xd), 1.5) + xd[0] * xd[1]; });
  Rng rng(3);
  for (int k = 0; k < 20; ++k) CHECK(eom_terms(l, rng.state(2, 3.0, 0.1, 2.0)).force.norm() == 0.0);
}

TEST_CASE("solved acceleration") {
  EomTerms t{Matrix::Identity(2, 2), Vector(2)};
  t.force << 3, -1;
  const Vector a = solved_acceleration(t);
  CHECK(a[0] == -3.0);
  CHECK(a[1] == 1.0);

  EomTerms d{Matrix::Identity(2, 2), Vector(2)};
  d.mass(0, 0) = 2.0;
  d.force << 1, 0;
  const Vector b = solved_acceleration(d);
  CHECK(b[0] == doctest::Approx(-0.5));
  CHECK(b[1] == 0.0);
  CHECK((d.mass * b + d.force).cwiseAbs().maxCoeff() <= 1e-9 * (1 + d.force.cwiseAbs().maxCoeff()));
}

TEST_CASE("geometric mass of a Finsler structure is rank deficient") {
  const auto f = zoo::randers();
  const State s = planar(0.3, -0.2, 0.7, 0.4);
  const auto terms = eom_terms(f.lg, s);
  CHECK(numerical_rank(terms.mass, 1e-10) == 1);
  CHECK_THROWS_AS(solved_acceleration(terms), SingularMassError);
}

TEST_CASE("Hamiltonian follows the homogeneity degree") {
  Rng rng(21);
  for (const auto& f : zoo::structures()) {
    for (int k = 0; k < 100; ++k) {
      const State s = rng.state(2, 1.0, 0.3, 2.0);
      const double le = f.le(s);
      CHECK(std::abs(hamiltonian(f.le, s) - le) <= 1e-10 * (1 + std::abs(le)));
      CHECK(std::abs(hamiltonian(f.lg, s)) <= 1e-10 * (1 + f.lg(s)));
    }
  }
  const ScalarField classical(2, [](auto x, auto xd) { return 0.5 * dot(xd, xd) - x[0]; });
  const State s = planar(0.8, 0, 1.0, 2.0);
  CHECK(hamiltonian(classical, s) == doctest::Approx(2.5 + 0.8));
}

TEST_CASE("action") {
  const ScalarField one(2, [](auto x, auto) { return scalar_of<decltype(x)>(1.0); });
  std::vector<double> times;
  for (int k = 0; k <= 37; ++k) times.push_back(0.1 * k);
  const auto line = sampled(times, [](double t) { return planar(t / 3.7 * 2.0, 0, 2.0 / 3.7, 0); });
  CHECK(action(one, line) == doctest::Approx(3.7));

  const ScalarField speed(2, [](auto, auto xd) { return norm(xd); });
  CHECK(action(speed, line) == doctest::Approx(2.0).epsilon(1e-12));

  Trajectory single;
  single.times = {0.0};
  single.states = {planar(0, 0, 1, 0)};
  CHECK_THROWS_AS(action(one, single), ValidationError);
}

TEST_CASE("action is additive over concatenation") {
  const auto f = zoo::conformal();
  const GeometryHandle g = geodesic_geometry(f);
  IntegratorConfig c;
  c.step = 1e-3;
  c.horizon = 1.0;
  const auto first = integrate([&](const State& s) { return generating_acceleration(g, s); }, planar(0, 0, 1, 0.3), c);
  const auto second = integrate(
      [&](double, const State& s) { return generating_acceleration(g, s); }, first.states.back(), c);
  Trajectory tail = second;
  for (auto& t : tail.times) t += first.times.back();
  const auto whole = first.joined(tail);
  CHECK(action(f.le, whole) == doctest::Approx(action(f.le, first) + action(f.le, tail)).epsilon(1e-12));
}

TEST_CASE("structure action is unchanged by retiming") {
  Vector center(2);
  center << 2.0, 0.5;
  const auto g = circle_barrier_geometry(center, 1.0, 0.7, 0.5);
  IntegratorConfig c;
  c.step = 1e-3;
  c.horizon = 3.0;
  const auto gen = integrate([&](const State& s) { return generating_acceleration(g, s); }, planar(-1, 0, 1.2, 0.1), c);
  const auto retimed = reparameterize(gen, [](double s) { return 0.4 + 0.3 * std::sin(2 * s); });
  for (const auto& f : {zoo::euclidean(2), zoo::randers(), zoo::quartic()}) {
    const double a = action(f.lg, gen), b = action(f.lg, retimed);
    CHECK(std::abs(a - b) <= 1e-4 * std::abs(a));
  }
}

TEST_CASE("mass matches the finite-difference Hessian") {
  Rng rng(4);
  for (const auto& field : zoo::fields()) {
    const State s = rng.state(2, 1.0, 0.3, 1.5);
    const auto fd = finite_difference_jet(field, s, 1e-5);
    CHECK((eom_terms(field, s).mass - fd.hess_xdxd()).cwiseAbs().maxCoeff() <= 1e-5);
  }
}

TEST_CASE("Hamiltonian of a Lagrangian system is conserved at fourth order") {
  // L = xd^T G(x) xd / 2 - V(x) with G = diag(1 + x1^2, 1), V = |x|^2 / 2
  const ScalarField l(2, [](auto x, auto xd) {
    return 0.5 * ((1.0 + x[0] * x[0]) * xd[0] * xd[0] + xd[1] * xd[1]) - 0.5 * dot(x, x);
  });
  const State s0 = planar(0.5, 0.2, 0.3, -0.6);
  auto drift = [&](double h) {
    IntegratorConfig c;
    c.step = h;
    c.horizon = 5.0;
    const auto t = integrate([&](const State& s) { return solved_acceleration(eom_terms(l, s)); }, s0, c);
    const double h0 = hamiltonian(l, s0);
    double worst = 0.0;
    for (const auto& s : t.states) worst = std::max(worst, std::abs(hamiltonian(l, s) - h0));
    return worst;
  };
  const double coarse = drift(0.04), fine = drift(0.02);
  CHECK(drift(1e-3) <= 1e-10);
  CHECK(coarse / fine >= 8.0);
}
