#pragma once

// Seeded generators for test states. std::mt19937_64 is fully specified, so a
// given seed produces the same draws on every platform using the same standard
// library.

#include <random>

#include "cpovm/linalg.hpp"

namespace cpovm {

using Rng = std::mt19937_64;

/// Entries i.i.d. complex Gaussian; no normalization.
inline Operator random_operator(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> normal;
  Operator m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) m(i, j) = Complex{normal(rng), normal(rng)};
  }
  return m;
}

/// Haar-distributed unit vector.
inline StateVector random_state_vector(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> normal;
  StateVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex{normal(rng), normal(rng)};
  return v / v.norm();
}

/// G G† / Tr(G G†) with G a dim x rank Gaussian matrix.
inline Operator random_density_matrix(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  std::normal_distribution<double> normal;
  Operator g(dim, rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = Complex{normal(rng), normal(rng)};
  }
  Operator rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace cpovm
