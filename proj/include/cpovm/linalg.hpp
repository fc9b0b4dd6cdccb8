#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "cpovm/types.hpp"

namespace cpovm {

/// Largest entry modulus; 0 for empty input.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_error(const Operator& m) {
  return max_abs(m - m.adjoint());
}

inline Operator hermitian_part(const Operator& m) {
  return (m + m.adjoint()) / 2.0;
}

inline Operator projector(const StateVector& v) {
  return v * v.adjoint();
}

/// Eigenvalues (ascending) of the Hermitian part of `m`.
inline RealVector hermitian_eigenvalues(const Operator& m) {
  Eigen::SelfAdjointEigenSolver<Operator> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline double min_eigenvalue(const Operator& m) {
  return hermitian_eigenvalues(m).minCoeff();
}

/// exp(i·t·H) for Hermitian H via its eigendecomposition. The result is unitary
/// to working precision regardless of the spectrum.
inline Operator expi_hermitian(const Operator& h, double t = 1.0) {
  Eigen::SelfAdjointEigenSolver<Operator> solver(hermitian_part(h));
  const auto& vecs = solver.eigenvectors();
  ComplexVector phases(solver.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, t * solver.eigenvalues()(i));
  }
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

inline void require_square(const Operator& m, Eigen::Index dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw StructuralError(std::string(what) + ": expected " + std::to_string(dim) + "x" +
                          std::to_string(dim) + " matrix, got " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
}

inline void require_length(const ComplexVector& v, Eigen::Index dim, const char* what) {
  if (v.size() != dim) {
    throw StructuralError(std::string(what) + ": expected length " + std::to_string(dim) +
                          ", got " + std::to_string(v.size()));
  }
}

inline void require_unit(const StateVector& v, double tol, const char* what) {
  const double n = v.norm();
  if (std::abs(n - 1.0) > tol) {
    throw ValidationError(std::string(what) + ": vector norm " + std::to_string(n) +
                          " is not 1");
  }
}

/// Hermitian, unit trace, PSD, each up to `tol`.
inline void require_density_matrix(const Operator& rho, double tol, const char* what) {
  if (hermiticity_error(rho) > tol) {
    throw ValidationError(std::string(what) + ": matrix is not Hermitian");
  }
  const Complex tr = rho.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > tol) {
    throw ValidationError(std::string(what) + ": trace " + std::to_string(tr.real()) +
                          " is not 1");
  }
  const double lmin = min_eigenvalue(rho);
  if (lmin < -tol) {
    throw ValidationError(std::string(what) + ": negative eigenvalue " + std::to_string(lmin));
  }
}

/// -Σ λ log λ over the eigenvalues of a PSD operator (trace need not be 1).
/// Eigenvalues in [-floor, 0) count as zero; anything below -floor throws.
inline double entropy_of_psd(const Operator& m, double floor, const char* what) {
  const RealVector evals = hermitian_eigenvalues(m);
  double s = 0.0;
  for (double lambda : evals) {
    if (lambda < -floor) {
      throw ValidationError(std::string(what) + ": negative eigenvalue " + std::to_string(lambda));
    }
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  }
  return s;
}

}  // namespace cpovm
