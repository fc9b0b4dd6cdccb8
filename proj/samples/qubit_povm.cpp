// Builds the covariant POVM of Z_3 x Z_2 from a random fiducial, measures a
// state, and recovers it from the outcome probabilities.
#include <iostream>

#include "cpovm/cpovm.hpp"

int main() {
  using namespace cpovm;
  const FiniteLCAGroup group({3, 2});
  Rng rng(7);
  const StateVector psi = random_state_vector(static_cast<Eigen::Index>(group.order()), rng);
  const Operator rho = random_density_matrix(static_cast<Eigen::Index>(group.order()), 2, rng);

  const CovariantPOVM povm = build_povm(group, psi);
  std::cout << "effects:            " << povm.size() << "\n"
            << "completeness error: " << completeness_error(povm) << "\n";

  const ProbabilityDensity p = measure(group, psi, rho);
  std::cout << "Shannon entropy:    " << classical_entropy(p) << " nats\n";

  const ReconstructionResult rec = reconstruct_state(group, p.probabilities(), psi);
  std::cout << "reconstruction err: " << max_abs(rec.rho - rho) << "\n";

  const ComplementarityReport comp = verify_complementarity(group, psi, random_state_vector(6, rng));
  std::cout << "entropy gap:        " << comp.entropy_dev << "\n";
}
