#pragma once

#include "nlgeom/state.hpp"

#include <cstdint>
#include <random>

namespace nlgeom {

/// Seeded generator whose draws are identical on every platform
/// (std::mt19937_64 is fully specified; the distributions are not, so the
/// conversions are done here).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Vector uniform_vector(Eigen::Index n, double lo, double hi) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  /// Random state with |x_i| <= position_box and velocity norm in [min_speed, max_speed].
  State state(Eigen::Index n, double position_box, double min_speed, double max_speed) {
    Vector x = uniform_vector(n, -position_box, position_box);
    Vector v;
    do {
      v = uniform_vector(n, -1.0, 1.0);
    } while (v.norm() < 1e-3 || v.norm() > 1.0);
    v *= uniform(min_speed, max_speed) / v.norm();
    return {std::move(x), std::move(v)};
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nlgeom
