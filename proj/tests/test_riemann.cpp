#include "nlgeom/integrate.hpp"
#include "nlgeom/lagrangian.hpp"
#include "nlgeom/linalg.hpp"
#include "nlgeom/random.hpp"
#include "nlgeom/riemann.hpp"
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

MetricField constant_metric(double a, double b) {
  return MetricField(
      2,
      [a, b](auto, auto g) {
        g[0] = a;
        g[1] = 0.0;
        g[2] = 0.0;
        g[3] = b;
      },
      "constant");
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("identity metric gives straight geodesics") {
  const auto f = riemannian_structure(zoo::identity_metric(2));
  const auto g = geodesic_geometry(f);
  IntegratorConfig c;
  c.step = 1e-2;
  c.horizon = 2.0;
  const auto t = integrate([&](const State& s) { return generating_acceleration(g, s); }, planar(0, 0, 1, 0.5), c);
  CHECK((t.states.back().x - planar(2, 1, 0, 0).x).norm() <= 1e-12);
}

TEST_CASE("energy tensor equals the metric") {
  const auto m = zoo::axis_metric();
  const auto e = energy_terms(riemannian_structure(m), planar(1, 0, 0.3, -0.8));
  CHECK(e.me(0, 0) == doctest::Approx(2.0));
  CHECK(e.me(1, 1) == doctest::Approx(1.0));
  Rng rng(9);
  for (int k = 0; k < 10; ++k) {
    const auto dense = zoo::dense_metric(4, 500 + k);
    const State s = rng.state(4, 1.0, 0.3, 2.0);
    CHECK(max_abs(energy_terms(riemannian_structure(dense), s).me - dense(s.x)) == 0.0);
  }
}

TEST_CASE("every SPD metric in the zoo passes the axioms") {
  Rng rng(10);
  std::vector<State> states;
  for (int k = 0; k < 50; ++k) states.push_back(rng.state(3, 1.0, 0.3, 2.0));
  for (int k = 0; k < 5; ++k) CHECK(validate_finsler(riemannian_structure(zoo::dense_metric(3, 20 + k)), states).ok());
  CHECK(validate_finsler(riemannian_structure(zoo::identity_metric(3)), states).ok());
}

TEST_CASE("closed-form geometric mass") {
  const Matrix flat = closed_form_mg(zoo::identity_metric(2), planar(0, 0, 1, 0));
  Matrix expected = Matrix::Zero(2, 2);
  expected(1, 1) = 1.0;
  CHECK(max_abs(flat - expected) <= 1e-15);

  const Matrix stretched = closed_form_mg(constant_metric(4, 1), planar(0, 0, 1, 0));
  expected(1, 1) = 0.5;
  CHECK(max_abs(stretched - expected) <= 1e-15);

  Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto m = zoo::dense_metric(3, 40 + k);
    const State s = rng.state(3, 1.0, 0.3, 2.0);
    const Matrix mg = closed_form_mg(m, s);
    CHECK((mg * s.xd).norm() <= 1e-9);
    CHECK(mixed_error(mg, geometric_terms(riemannian_structure(m), s).mg) <= 1e-8);
  }

  const MetricField indefinite(
      2,
      [](auto, auto g) {
        g[0] = 1.0;
        g[1] = 2.0;
        g[2] = 2.0;
        g[3] = 1.0;
      },
      "indefinite");
  CHECK_THROWS_AS(closed_form_mg(indefinite, planar(0, 0, 1, 0)), DomainError);
  CHECK_THROWS_AS(closed_form_mg(zoo::identity_metric(2), planar(0, 0, 0, 0)), DomainError);
}

TEST_CASE("fictitious force") {
  CHECK(fictitious_force(constant_metric(3, 2), planar(1, 2, 3, 4)).norm() == 0.0);
  const Vector f = fictitious_force(zoo::axis_metric(), planar(1, 0, 1, 1));
  CHECK(f[0] == doctest::Approx(1.0));
  CHECK(f[1] == doctest::Approx(0.0));

  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const auto m = zoo::dense_metric(2, 60 + k);
    const State s = rng.state(2, 1.0, 0.3, 2.0);
    const Vector base = fictitious_force(m, s);
    CHECK(mixed_error(fictitious_force(m, State(s.x, 2.0 * s.xd)), 4.0 * base) <= 1e-10);
    CHECK(mixed_error(base, energy_terms(riemannian_structure(m), s).fe) <= 1e-8);
  }
}

TEST_CASE("metric derivatives against finite differences") {
  const auto m = zoo::dense_metric(3, 77);
  Vector x(3);
  x << 0.3, -0.2, 0.5;
  const auto d = m.derivatives(x);
  CHECK(d.size() == 3);
  for (Eigen::Index k = 0; k < 3; ++k) {
    Vector p = x, q = x;
    p[k] += 1e-6;
    q[k] -= 1e-6;
    CHECK(max_abs((m(p) - m(q)) / 2e-6 - d[static_cast<std::size_t>(k)]) <= 1e-7);
  }
}

TEST_CASE("Riemannian Hamiltonian equals the energy") {
  Rng rng(13);
  const auto m = zoo::dense_metric(2, 5);
  const auto f = riemannian_structure(m);
  for (int k = 0; k < 50; ++k) {
    const State s = rng.state(2, 1.0, 0.3, 2.0);
    const double kinetic = 0.5 * s.xd.dot(m(s.x) * s.xd);
    CHECK(std::abs(hamiltonian(f.le, s) - kinetic) <= 1e-10 * (1 + kinetic));
    CHECK(std::abs(f.le(s) - kinetic) <= 1e-12 * (1 + kinetic));
  }
}

TEST_CASE("geodesics are energy levels and speed-independent paths") {
  const auto m = zoo::dense_metric(2, 11);
  const auto f = riemannian_structure(m);
  const auto g = geodesic_geometry(f);
  auto run = [&](double speed) {
    IntegratorConfig c;
    c.step = 1e-3;
    c.horizon = 4.0 / speed;
    return integrate([&](const State& s) { return generating_acceleration(g, s); }, planar(0.1, 0.2, 0.6 * speed, 0.8 * speed),
                     c);
  };
  const auto slow = run(0.5), fast = run(2.0), base = run(1.0);
  CHECK(energy_drift(base, [&](const State& s) { return 0.5 * s.xd.dot(m(s.x) * s.xd); }) <= 1e-6);
  CHECK(path_distance(slow, base) <= 1e-3);
  CHECK(path_distance(fast, base) <= 1e-3);
}

TEST_CASE("metric dimension is bounded") {
  CHECK_THROWS_AS(zoo::identity_metric(11), ValidationError);
  CHECK_THROWS_AS(zoo::identity_metric(0), ValidationError);
}
