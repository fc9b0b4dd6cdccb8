#pragma once

// Harmonic oscillator (G = R) in a Fock space truncated to |0⟩ … |N-1⟩.
//
//   a|n⟩ = √n |n-1⟩,  q = (a + a†)/√2,  p = (a - a†)/(i√2)
//   D(α) = exp(α a† - ᾱ a),  |α⟩ = D(α)|0⟩,  Q_ρ(α) = ⟨α|ρ|α⟩ / π
//
// Truncation breaks [a, a†] = I in the last row and column. Results for
// displacements with |α|² ≤ N/4 agree with the untruncated operators to well
// below the tolerances used here.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "cpovm/linalg.hpp"

namespace cpovm::cv {

inline constexpr int kDefaultDim = 40;

class FockSpace {
 public:
  explicit FockSpace(int dim) : dim_(dim) {
    if (dim < 2) throw StructuralError("Fock space truncation must be at least 2");
  }

  int dim() const noexcept { return dim_; }

  Operator annihilation() const {
    Operator a = Operator::Zero(dim_, dim_);
    for (int n = 1; n < dim_; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
  }
  Operator creation() const { return annihilation().adjoint(); }
  Operator position() const { return (annihilation() + creation()) / std::numbers::sqrt2; }
  Operator momentum() const {
    return (annihilation() - creation()) / Complex{0.0, std::numbers::sqrt2};
  }
  Operator number() const { return creation() * annihilation(); }

  /// |α|² ≤ N/4
  bool in_regime(Complex alpha) const noexcept { return std::norm(alpha) <= dim_ / 4.0; }

 private:
  int dim_;
};

/// exp(α a† - ᾱ a); the generator is anti-Hermitian so the result is exactly unitary.
inline Operator displacement(Complex alpha, int dim) {
  const FockSpace space(dim);
  const Operator a = space.annihilation();
  // α a† - ᾱ a = i·H with H = -i(α a† - ᾱ a) Hermitian
  const Operator h = Complex{0.0, -1.0} * (alpha * a.adjoint() - std::conj(alpha) * a);
  return expi_hermitian(h);
}

struct CoherentState {
  Complex alpha;
  StateVector vector;
  /// false when |α|² > N/4; the vector is still returned.
  bool in_regime = true;
};

inline CoherentState coherent_state(Complex alpha, int dim) {
  const FockSpace space(dim);
  StateVector vacuum = StateVector::Zero(dim);
  vacuum(0) = 1.0;
  return {alpha, displacement(alpha, dim) * vacuum, space.in_regime(alpha)};
}

/// Fock amplitudes e^{-|α|²/2} αⁿ/√(n!) for n < dim, i.e. the exact coherent
/// state projected onto the truncated space (norm ≤ 1).
inline StateVector coherent_amplitudes(Complex alpha, int dim) {
  StateVector c(dim);
  c(0) = std::exp(-std::norm(alpha) / 2.0);
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

/// Q(α) = ⟨α|ρ|α⟩/π
inline double husimi(const Operator& rho, Complex alpha) {
  if (rho.rows() != rho.cols()) throw StructuralError("husimi: density matrix is not square");
  const StateVector v = coherent_amplitudes(alpha, static_cast<int>(rho.rows()));
  return v.dot(rho * v).real() / std::numbers::pi;
}

/// Uniform square grid of cells() x cells() cells of side `step`, centred on the
/// origin and sampled at cell midpoints. Covers [-radius, radius]² exactly when
/// step divides 2·radius.
struct Grid {
  double radius = 6.0;
  double step = 0.05;

  int cells() const {
    if (!(radius > 0.0) || !(step > 0.0)) throw ValidationError("grid radius and step must be positive");
    return static_cast<int>(std::lround(2.0 * radius / step));
  }
  double coordinate(int i) const { return step * (i + 0.5 - cells() / 2.0); }
  double cell_area() const { return step * step; }
};

struct HusimiSample {
  double re;
  double im;
  double q;
};

inline std::vector<HusimiSample> husimi_grid(const Operator& rho, const Grid& grid) {
  const int m = grid.cells();
  std::vector<HusimiSample> out;
  out.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const Complex alpha{grid.coordinate(i), grid.coordinate(j)};
      out.push_back({alpha.real(), alpha.imag(), husimi(rho, alpha)});
    }
  }
  return out;
}

/// Midpoint-rule integral of Q over the grid.
inline double husimi_integral(const Operator& rho, const Grid& grid) {
  double total = 0.0;
  for (const auto& s : husimi_grid(rho, grid)) total += s.q;
  return total * grid.cell_area();
}

struct ResolutionReport {
  int dim = 0;
  Grid grid;
  int block = 0;
  std::size_t points = 0;
  /// max entry of (h²/π)Σ|α⟩⟨α| - I on the top-left block
  double max_deviation = 0.0;
  /// |⟨0|(h²/π)Σ|α⟩⟨α||0⟩ - 1|
  double vacuum_deviation = 0.0;
};

inline ResolutionReport resolution_check(int dim, const Grid& grid, int block) {
  if (block < 1 || block > dim) throw ValidationError("resolution block must lie in [1, N]");
  const FockSpace space(dim);
  const int m = grid.cells();
  Operator acc = Operator::Zero(block, block);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const StateVector v = coherent_amplitudes({grid.coordinate(i), grid.coordinate(j)}, block);
      acc.noalias() += v * v.adjoint();
    }
  }
  acc *= grid.cell_area() / std::numbers::pi;
  ResolutionReport r;
  r.dim = space.dim();
  r.grid = grid;
  r.block = block;
  r.points = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  r.max_deviation = max_abs(acc - Operator::Identity(block, block));
  r.vacuum_deviation = std::abs(acc(0, 0) - Complex{1.0, 0.0});
  return r;
}

struct PhaseCheckReport {
  double x = 0.0;
  double y = 0.0;
  int dim = 0;
  int block = 0;
  Complex alpha;        // (-y + ix)/√2
  Complex omega;        // e^{ixq}e^{iyp} = ω·D(α) on the low Fock columns
  double fit_residual = 0.0;  // max entry of e^{ixq}e^{iyp} - ω·D(α) on those columns
  Complex bch_phase;    // e^{-ixy/2}
  Complex quadratic_phase;  // e^{-α²+ᾱ²}
  double bch_deviation = 0.0;
  double quadratic_deviation = 0.0;
  bool in_regime = true;

  bool scalar_relation_holds(double tol = 1e-6) const { return fit_residual <= tol; }
};

inline int default_phase_block(int dim) { return std::max(1, dim / 8); }

/// Measures the scalar relating e^{ixq}e^{iyp} to D(α), α = (-y+ix)/√2, using the
/// first `block` columns (low Fock states, where truncation is invisible).
/// block <= 0 selects default_phase_block(dim).
inline PhaseCheckReport weyl_phase_check(double x, double y, int dim, int block = 0) {
  if (block <= 0) block = default_phase_block(dim);
  if (block > dim) throw ValidationError("phase-check block must lie in [1, N]");
  const FockSpace space(dim);
  const Operator product = expi_hermitian(space.position(), x) * expi_hermitian(space.momentum(), y);
  const Complex alpha = Complex{-y, x} / std::numbers::sqrt2;
  const Operator d = displacement(alpha, dim);

  const auto lhs = product.leftCols(block);
  const auto rhs = d.leftCols(block);
  // least squares: ω = ⟨D, P⟩ / ⟨D, D⟩ in the Frobenius inner product
  const Complex omega = (rhs.conjugate().cwiseProduct(lhs)).sum() / rhs.squaredNorm();

  PhaseCheckReport r;
  r.x = x;
  r.y = y;
  r.dim = dim;
  r.block = block;
  r.alpha = alpha;
  r.omega = omega;
  r.fit_residual = max_abs(Operator(lhs - omega * rhs));
  r.bch_phase = std::polar(1.0, -x * y / 2.0);
  r.quadratic_phase = std::exp(-alpha * alpha + std::conj(alpha) * std::conj(alpha));
  r.bch_deviation = std::abs(omega - r.bch_phase);
  r.quadratic_deviation = std::abs(omega - r.quadratic_phase);
  r.in_regime = std::abs(x) <= 2.0 && std::abs(y) <= 2.0 && dim >= 40;
  return r;
}

}  // namespace cpovm::cv
