#pragma once

/// Riemannian structures L_g = sqrt(xd^T G(x) xd): the closed-form special
/// case used as an independent oracle for the generic Finsler machinery.

#include "nlgeom/autodiff.hpp"
#include "nlgeom/finsler.hpp"

#include <array>
#include <functional>
#include <span>
#include <string>

namespace nlgeom {

inline constexpr std::size_t kMaxMetricDim = 10;

/// Position-dependent SPD matrix G(x). Built from a generic callable
/// `f(std::span<const T> x, std::span<T> g)` writing G row-major into g.
class MetricField {
 public:
  using ValueFn = std::function<void(std::span<const double>, std::span<double>)>;
  using JetFn = std::function<void(std::span<const HyperDual>, std::span<HyperDual>)>;

  MetricField() = default;

  template <class F>
    requires std::is_invocable_v<const F&, std::span<const double>, std::span<double>> &&
             std::is_invocable_v<const F&, std::span<const HyperDual>, std::span<HyperDual>>
  MetricField(std::size_t dim, F f, std::string name = {})
      : dim_(dim),
        value_([f](std::span<const double> x, std::span<double> g) { f(x, g); }),
        jet_([f](std::span<const HyperDual> x, std::span<HyperDual> g) { f(x, g); }),
        name_(std::move(name)) {
    if (dim == 0 || dim > kMaxMetricDim) throw ValidationError("metric dimension must be in [1, 10]");
  }

  std::size_t dim() const { return dim_; }
  const std::string& name() const { return name_; }

  Matrix operator()(const Vector& x) const;
  void operator()(std::span<const double> x, std::span<double> g) const { value_(x, g); }
  void operator()(std::span<const HyperDual> x, std::span<HyperDual> g) const { jet_(x, g); }

  /// dG/dx_k for each k, from first-order jet sweeps of the entries.
  std::vector<Matrix> derivatives(const Vector& x) const;

 private:
  std::size_t dim_ = 0;
  ValueFn value_;
  JetFn jet_;
  std::string name_;
};

/// L_g = sqrt(xd^T G xd) with the energy L_e = xd^T G xd / 2 supplied in
/// closed form, so M_e = G holds exactly.
FinslerStructure riemannian_structure(const MetricField& m);

/// M_g = G^{1/2} (I - vhat vhat^T) G^{1/2} / |xd|_G with v = G^{1/2} xd.
/// Throws DomainError for a non-SPD metric or zero velocity.
Matrix closed_form_mg(const MetricField& m, const State& s);

/// f_e = d/dx(G xd) xd - d/dx(xd^T G xd / 2), assembled from dG/dx_k.
Vector fictitious_force(const MetricField& m, const State& s);

}  // namespace nlgeom
