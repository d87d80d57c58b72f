#include "nlgeom/finsler.hpp"
#include "nlgeom/geometry.hpp"
#include "nlgeom/integrate.hpp"
#include "nlgeom/random.hpp"
#include "nlgeom/suites.hpp"
#include "nlgeom/zoo.hpp"

#include <doctest.h>

#include <cmath>

using namespace nlgeom;

namespace {

Vector vec(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

State planar(double x, double y, double vx, double vy) { return {vec(x, y), vec(vx, vy)}; }

std::vector<State> samples(std::uint64_t seed, std::size_t n = 100) {
  Rng rng(seed);
  std::vector<State> out;
  while (out.size() < n) {
    State s = rng.state(2, 3.0, 0.2, 2.0);
    if (s.x.norm() > 1.2) out.push_back(s);  // outside the unit obstacle used below
  }
  return out;
}

IntegratorConfig config(double step, double horizon) {
  IntegratorConfig c;
  c.step = step;
  c.horizon = horizon;
  return c;
}

Trajectory line(double offset, double length, int n) {
  Trajectory t;
  for (int k = 0; k <= n; ++k) {
    t.times.push_back(k);
    t.states.push_back(planar(length * k / n, offset, 1, 0));
  }
  return t;
}

}  // namespace

TEST_CASE("projection orthogonal to velocity") {
  CHECK(project_perp(vec(1, 0), vec(3, 0)).norm() == 0.0);
  CHECK((project_perp(vec(1, 0), vec(0, 2)) - vec(0, 2)).norm() == 0.0);
  const Vector p = project_perp(vec(1, 1) / std::sqrt(2.0), vec(1, 0));
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(-0.5));
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const Vector xd = rng.uniform_vector(3, -2, 2), v = rng.uniform_vector(3, -2, 2);
    CHECK(std::abs(project_perp(xd, v).dot(xd)) <= 1e-12 * (1 + xd.norm() * v.norm()));
  }
  CHECK_THROWS_AS(project_perp(vec(0, 0), vec(1, 0)), DomainError);
}

TEST_CASE("homogeneity check") {
  const auto states = samples(2);
  const GeometryHandle scaled_field(2, [](const State& s) -> Vector {
    return s.xd.squaredNorm() * vec(std::sin(s.x[0]), s.x[0] * s.x[1]);
  });
  CHECK(check_homogeneity(scaled_field, states, 2).max_violation <= 1e-12);

  const GeometryHandle linear(2, [](const State& s) -> Vector { return s.xd; });
  const auto report = check_homogeneity(linear, states, 2);
  // |l - l^2| |xd| / (1 + l^2 |xd|) at l = 2 approaches 0.5 for large speeds
  CHECK(report.per_scale[1] > 0.25);
  CHECK(report.per_scale[1] < 0.5);
  CHECK(report.max_violation >= report.per_scale[1]);

  const auto barrier = circle_barrier_geometry(vec(0, 0), 1.0, 0.7, 0.5);
  CHECK(barrier.declared_degree() == 2);
  CHECK(check_homogeneity(barrier, states, 2).max_violation <= 1e-12);
}

TEST_CASE("generating and explicit accelerations") {
  const GeometryHandle flat(2, [](const State& s) -> Vector { return Vector::Zero(s.x.size()); });
  CHECK(generating_acceleration(flat, planar(1, 2, 3, 4)).norm() == 0.0);
  CHECK((explicit_acceleration(flat, planar(0, 0, 2, 0), 1.0) - vec(-2, 0)).norm() == 0.0);

  const auto barrier = circle_barrier_geometry(vec(0, 0), 1.0, 0.7, 0.5);
  // distance 2r on the +x axis: phi = 1, d psi/dq = -2k phi^-3 (1/r) qhat = (-1, 0)
  const Vector a = generating_acceleration(barrier, planar(2, 0, 0, 1));
  CHECK(a[0] == doctest::Approx(0.7));
  CHECK(a[1] == doctest::Approx(0.0));
  CHECK(generating_acceleration(barrier, planar(2, 0, 0, 0)).norm() == 0.0);
  // quadratic decay towards zero velocity
  const double h1 = barrier(planar(2, 0.3, 1e-3, 0)).norm(), h2 = barrier(planar(2, 0.3, 1e-4, 0)).norm();
  CHECK(h1 / h2 == doctest::Approx(100.0).epsilon(1e-9));

  const auto s = planar(1.5, 1.1, 0.4, -0.9);
  CHECK((explicit_acceleration(barrier, s, 0.0) - generating_acceleration(barrier, s)).norm() == 0.0);
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    const double alpha = rng.uniform(-5, 5);
    CHECK(project_perp(s.xd, explicit_acceleration(barrier, s, alpha) + barrier(s)).norm() <= 1e-12);
  }
}

TEST_CASE("velocity floor") {
  const GeometryHandle g(2, [](const State& s) -> Vector { return s.xd.squaredNorm() * vec(1, 1) + vec(1, 0); }, "g",
                         1e-6);
  CHECK(g(planar(0, 0, 1e-7, 0)).norm() == 0.0);
  CHECK(g(planar(0, 0, 1e-3, 0)).norm() > 0.0);
}

TEST_CASE("circle obstacle") {
  const CircleObstacle o{vec(0, 0), 1.0};
  CHECK(o.phi(vec(2, 0)) == doctest::Approx(1.0));
  const Vector grad = o.grad_phi(vec(0, 2));
  CHECK(grad[1] == doctest::Approx(1.0));
  const auto barrier = circle_barrier_geometry(vec(0, 0), 1.0, 0.7, 0.5);
  CHECK_THROWS_AS(barrier(planar(0.5, 0, 1, 0)), DomainError);
  CHECK_THROWS_AS(circle_barrier_geometry(vec(0, 0), 0.0, 0.7, 0.5), ValidationError);
}

TEST_CASE("reparameterization") {
  const auto barrier = circle_barrier_geometry(vec(0, 0), 1.0, 0.7, 0.5);
  const auto gen = integrate([&](const State& s) { return generating_acceleration(barrier, s); },
                             planar(-3, 0.6, 1.2, 0), config(1e-3, 4.0));

  const auto same = reparameterize(gen, [](double) { return 0.0; });
  for (std::size_t k = 0; k < gen.size(); k += 97) {
    CHECK(same.times[k] == doctest::Approx(gen.times[k]).epsilon(1e-14));
    CHECK((same.states[k].xd - gen.states[k].xd).norm() <= 1e-14);
  }

  const double c = 0.8;
  const auto constant = reparameterize(gen, [c](double) { return c; });
  const auto& rate = constant.diagnostics.at("dt_ds");
  const auto& s = constant.diagnostics.at("s");
  double worst = 0.0;
  for (std::size_t k = 0; k < rate.size(); ++k) {
    worst = std::max(worst, std::abs(rate[k] - std::exp(-c * s[k])));
    worst = std::max(worst, std::abs(constant.times[k] - (1 - std::exp(-c * s[k])) / c));
  }
  CHECK(worst <= 1e-8);

  const auto wavy = reparameterize(gen, [](double t) { return 0.3 + 0.5 * std::sin(3 * t); });
  CHECK(path_distance(gen, wavy) <= 1e-3);
  CHECK(explicit_residual(barrier, wavy, wavy.diagnostics.at("alpha_explicit")) <= 1e-6);

  CHECK_THROWS_AS(reparameterize(gen, [](double) { return 10.0; }), ReparameterizationError);
  try {
    reparameterize(gen, [](double) { return -10.0; });
    FAIL("expected a blow-up");
  } catch (const ReparameterizationError& e) {
    CHECK(e.failing_s() > 0.0);
    CHECK(e.failing_s() <= 4.0);
  }
}

TEST_CASE("explicit solutions retime back into generating solutions") {
  const auto g = geodesic_geometry(zoo::quartic());
  const AlphaProfile a = [](double t) { return -0.4 + 0.6 * std::cos(t); };
  const auto sol = integrate([&](double t, const State& s) { return explicit_acceleration(g, s, a(t)); },
                             planar(0.1, 0.2, 0.9, -0.5), config(1e-3, 3.0));
  auto back = reparameterize(sol, a);
  CHECK(generating_residual(g, back) <= 1e-6);
  back.accelerations = suites::differentiate_velocities(back);
  CHECK(generating_residual(g, back) <= 1e-6);
  // the explicit solution itself is not a generating one
  CHECK(generating_residual(g, sol) > 1e-3);
}

TEST_CASE("five point differentiation") {
  Trajectory t;
  double time = 0.0;
  for (int k = 0; k < 40; ++k) {
    t.times.push_back(time);
    t.states.push_back(planar(0, 0, std::sin(time), time * time * time));
    time += 0.01 + 0.005 * std::sin(k);  // nonuniform grid
  }
  const auto acc = suites::differentiate_velocities(t);
  double worst = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    worst = std::max(worst, std::abs(acc[k][0] - std::cos(t.times[k])));
    worst = std::max(worst, std::abs(acc[k][1] - 3 * t.times[k] * t.times[k]));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("path distance") {
  const auto a = line(0.0, 1.0, 50);
  CHECK(path_distance(a, a) == 0.0);
  CHECK(path_distance(a, line(0.1, 1.0, 80)) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(path_distance(a, line(0.0, 0.0, 10)), ValidationError);

  const auto poly = resample_path(a, 11);
  CHECK(poly.points.size() == 11);
  CHECK(poly.total_length == doctest::Approx(1.0));
  for (std::size_t k = 1; k < poly.points.size(); ++k)
    CHECK((poly.points[k] - poly.points[k - 1]).norm() == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("barrier paths agree across initial speeds") {
  const auto barrier = circle_barrier_geometry(vec(0, 0), 1.0, 0.7, 0.5);
  auto run = [&](double speed) {
    return integrate([&](const State& s) { return generating_acceleration(barrier, s); }, planar(-3, 0.5, speed, 0),
                     config(1e-3, 6.0 / speed));
  };
  CHECK(path_distance(run(1.5), run(0.75)) <= 1e-3);
}
