#include "nlgeom/lagrangian.hpp"

#include "nlgeom/errors.hpp"
#include "nlgeom/linalg.hpp"

namespace nlgeom {

EomTerms eom_terms(const ScalarField& lagrangian, const State& s) {
  const Jet2 j = evaluate_jet(lagrangian, s);
  return {j.hess_xdxd(), j.hess_xdx() * s.xd - j.grad_x()};
}

Vector solved_acceleration(const EomTerms& terms) {
  return -solve_symmetric(terms.mass, terms.force, kMassConditionLimit);
}

double hamiltonian(const ScalarField& lagrangian, const State& s) {
  const Jet2 j = evaluate_gradient(lagrangian, s);
  return j.grad_xd().dot(s.xd) - j.value;
}

double action(const ScalarField& lagrangian, const Trajectory& traj) {
  if (traj.size() < 2) throw ValidationError("action needs at least two trajectory samples");
  traj.validate();
  double sum = 0.0;
  double prev = lagrangian(traj.states.front());
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double cur = lagrangian(traj.states[k]);
    sum += 0.5 * (traj.times[k] - traj.times[k - 1]) * (prev + cur);
    prev = cur;
  }
  return sum;
}

}  // namespace nlgeom
