#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cpovm {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Arguments whose shape does not fit the group (wrong rank, wrong length, non-square).
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Arguments of the right shape that violate a mathematical precondition
/// (non-unit vector, non-PSD state, negative density).
class ValidationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when the fiducial's phase-space transform vanishes somewhere, so the
/// measurement statistics do not determine the state.
class ReconstructionError : public std::runtime_error {
 public:
  ReconstructionError(const std::string& what, std::vector<std::size_t> vanishing)
      : std::runtime_error(what), vanishing_points_(std::move(vanishing)) {}

  /// Phase-point indices where the fiducial transform is below tolerance.
  const std::vector<std::size_t>& vanishing_points() const noexcept { return vanishing_points_; }

 private:
  std::vector<std::size_t> vanishing_points_;
};

}  // namespace cpovm
