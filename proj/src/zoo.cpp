#include "nlgeom/zoo.hpp"

#include "nlgeom/random.hpp"

#include <array>

namespace nlgeom::zoo {

MetricField identity_metric(std::size_t n) {
  return MetricField(
      n,
      [n](auto, auto g) {
        for (std::size_t i = 0; i < n * n; ++i) g[i] = 0.0;
        for (std::size_t i = 0; i < n; ++i) g[i * n + i] = 1.0;
      },
      "identity");
}

MetricField axis_metric() {
  return MetricField(
      2,
      [](auto x, auto g) {
        g[0] = 1.0 + x[0] * x[0];
        g[1] = 0.0;
        g[2] = 0.0;
        g[3] = 1.0;
      },
      "axis");
}

MetricField dense_metric(std::size_t n, std::uint64_t seed, double eps) {
  // A_ij(x) = delta_ij + 0.3 c0_ij + 0.3 sum_k c1_ijk x_k + 0.1 sum_k c2_ijk x_k^2
  Rng rng(seed);
  std::vector<double> c0(n * n), c1(n * n * n), c2(n * n * n);
  for (auto& c : c0) c = rng.uniform(-1.0, 1.0);
  for (auto& c : c1) c = rng.uniform(-1.0, 1.0);
  for (auto& c : c2) c = rng.uniform(-1.0, 1.0);
  return MetricField(
      n,
      [n, c0, c1, c2, eps](auto x, auto g) {
        using T = scalar_of<decltype(g)>;
        std::array<T, kMaxMetricDim * kMaxMetricDim> a{};
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            T v((i == j ? 1.0 : 0.0) + 0.3 * c0[i * n + j]);
            for (std::size_t k = 0; k < n; ++k) {
              v += 0.3 * c1[(i * n + j) * n + k] * x[k];
              v += 0.1 * c2[(i * n + j) * n + k] * (x[k] * x[k]);
            }
            a[i * n + j] = v;
          }
        }
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i; j < n; ++j) {
            T v(i == j ? eps : 0.0);
            for (std::size_t k = 0; k < n; ++k) v += a[k * n + i] * a[k * n + j];
            g[i * n + j] = v;
            g[j * n + i] = v;
          }
        }
      },
      "dense" + std::to_string(seed));
}

FinslerStructure euclidean(std::size_t n) {
  ScalarField lg(n, [](auto, auto xd) { return norm(xd); }, "euclidean");
  ScalarField le(n, [](auto, auto xd) { return 0.5 * dot(xd, xd); }, "euclidean_energy");
  return make_finsler(std::move(lg), std::move(le), "euclidean");
}

FinslerStructure conformal() {
  ScalarField lg(2, [](auto x, auto xd) { return norm(xd) * (1.0 + 0.5 * nlgeom::tanh(x[0])); }, "conformal");
  return make_finsler(std::move(lg), "conformal");
}

FinslerStructure randers() {
  ScalarField lg(
      2,
      [](auto x, auto xd) {
        // G = diag(1 + x1^2 / 2, 1 + tanh(x2)^2), b = (0.3 tanh(x2), 0.2 tanh(x1))
        const auto q = (1.0 + 0.5 * x[0] * x[0]) * xd[0] * xd[0] +
                       (1.0 + square(nlgeom::tanh(x[1]))) * xd[1] * xd[1] + 0.2 * xd[0] * xd[1];
        const auto drift = 0.3 * nlgeom::tanh(x[1]) * xd[0] + 0.2 * nlgeom::tanh(x[0]) * xd[1];
        return nlgeom::sqrt(q) + drift;
      },
      "randers");
  return make_finsler(std::move(lg), "randers");
}

FinslerStructure quartic() {
  ScalarField lg(
      2,
      [](auto x, auto xd) {
        const auto r2 = dot(xd, xd);
        const auto quart = square(xd[0] * xd[0]) + square(xd[1] * xd[1]);
        const auto scale = 1.0 + 0.3 * nlgeom::tanh(x[0] + 0.5 * x[1]);
        return scale * nlgeom::sqrt(r2 + 0.2 * quart / r2);
      },
      "quartic");
  return make_finsler(std::move(lg), "quartic");
}

std::vector<FinslerStructure> structures() {
  return {
      euclidean(2),
      riemannian_structure(axis_metric()),
      riemannian_structure(dense_metric(2, 11)),
      conformal(),
      randers(),
      quartic(),
  };
}

ScalarField random_polynomial(std::uint64_t seed) {
  struct Term {
    std::array<int, 4> power;
    double coeff;
  };
  Rng rng(seed);
  std::vector<Term> terms;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b)
      for (int c = 0; a + b + c <= 4; ++c)
        for (int d = 0; a + b + c + d <= 4; ++d) terms.push_back({{a, b, c, d}, rng.uniform(-1.0, 1.0) / 8.0});
  return ScalarField(
      2,
      [terms](auto x, auto xd) {
        using T = scalar_of<decltype(x)>;
        const std::array<T, 4> z{x[0], x[1], xd[0], xd[1]};
        T acc(0.0);
        for (const auto& t : terms) {
          T m(t.coeff);
          for (std::size_t i = 0; i < 4; ++i)
            for (int p = 0; p < t.power[i]; ++p) m *= z[i];
          acc += m;
        }
        return acc;
      },
      "poly" + std::to_string(seed));
}

std::vector<ScalarField> fields() {
  std::vector<ScalarField> out;
  for (const auto& f : structures()) {
    out.push_back(f.lg);
    out.push_back(f.le);
  }
  out.push_back(random_polynomial(3));
  out.push_back(ScalarField(
      2, [](auto x, auto xd) { return nlgeom::exp(x[0]) * xd[1] * xd[1]; }, "exp_x1_xd2sq"));
  out.push_back(ScalarField(
      2,
      [](auto x, auto xd) { return nlgeom::log(2.0 + x[0] * x[0]) * nlgeom::pow(1.0 + dot(xd, xd), 1.5) / (3.0 + x[1]); },
      "log_pow_quotient"));
  return out;
}

}  // namespace nlgeom::zoo
