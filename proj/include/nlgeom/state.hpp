#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace nlgeom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Position and velocity in n-dimensional configuration space.
struct State {
  Vector x;
  Vector xd;

  State() = default;
  State(Vector position, Vector velocity) : x(std::move(position)), xd(std::move(velocity)) {}

  std::size_t dim() const { return static_cast<std::size_t>(x.size()); }
};

}  // namespace nlgeom
