#pragma once

// Hilbert-Schmidt operators on L2(G) <-> square-integrable functions on
// dual(G) x G with weight 1/|G| per point:
//
//   (Tρ)(χ,g) = Tr(ρ U_{χ,g}),     T^{-1}F = Σ w·F(χ,g)·U_{χ,g}†
//
// T is unitary: Σ w |Tρ|² = Tr(ρ†ρ).

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "cpovm/linalg.hpp"
#include "cpovm/weyl_repr.hpp"

namespace cpovm {

/// Complex function on dual(G) x G stored in phase-point order.
class PhaseSpaceFunction {
 public:
  PhaseSpaceFunction(FiniteLCAGroup group, ComplexVector values)
      : group_(std::move(group)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != phase_point_count(group_)) {
      throw StructuralError("phase-space function needs one value per phase point");
    }
  }

  static PhaseSpaceFunction zero(const FiniteLCAGroup& group) {
    return {group, ComplexVector::Zero(static_cast<Eigen::Index>(phase_point_count(group)))};
  }

  const FiniteLCAGroup& group() const noexcept { return group_; }
  const ComplexVector& values() const noexcept { return values_; }
  ComplexVector& values() noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }

  Complex operator[](std::size_t index) const { return values_(static_cast<Eigen::Index>(index)); }
  Complex operator()(const PhasePoint& p) const { return (*this)[phase_index(group_, p)]; }

  /// Σ w·F·conj(G)
  Complex inner(const PhaseSpaceFunction& other) const {
    if (!(other.group_ == group_)) throw StructuralError("phase-space functions on different groups");
    return other.values_.dot(values_) * group_.weights().phase;
  }

  double norm_squared() const { return values_.squaredNorm() * group_.weights().phase; }

 private:
  FiniteLCAGroup group_;
  ComplexVector values_;
};

inline PhaseSpaceFunction hs_transform(const FiniteLCAGroup& group, const Operator& rho) {
  const std::size_t n = group.order();
  require_square(rho, static_cast<Eigen::Index>(n), "hs_transform");
  const detail::GroupTables t(group);
  ComplexVector values(static_cast<Eigen::Index>(n * n));
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t g = 0; g < n; ++g) {
      // Tr(ρU) = Σ_h ρ[h+g, h] χ(h)
      Complex acc{0.0, 0.0};
      for (std::size_t h = 0; h < n; ++h) {
        acc += rho(static_cast<Eigen::Index>(t.plus(h, g)), static_cast<Eigen::Index>(h)) * t.chi(c, h);
      }
      values(static_cast<Eigen::Index>(c * n + g)) = acc;
    }
  }
  return {group, std::move(values)};
}

inline Operator hs_inverse(const FiniteLCAGroup& group, const PhaseSpaceFunction& f) {
  if (!(f.group() == group)) throw StructuralError("hs_inverse: function lives on a different group");
  const std::size_t n = group.order();
  const double w = group.weights().phase;
  const detail::GroupTables t(group);
  const auto dim = static_cast<Eigen::Index>(n);
  Operator out = Operator::Zero(dim, dim);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t g = 0; g < n; ++g) {
      const Complex coeff = w * f[c * n + g];
      if (coeff == Complex{0.0, 0.0}) continue;
      // U† has entries conj(χ(h)) at (h+g, h)
      for (std::size_t h = 0; h < n; ++h) {
        out(static_cast<Eigen::Index>(t.plus(h, g)), static_cast<Eigen::Index>(h)) +=
            coeff * std::conj(t.chi(c, h));
      }
    }
  }
  return out;
}

/// F_jk(χ,g) = Tr(|δ_j⟩⟨δ_k| U_{χ,g}) = χ(k)·[j = k+g].
inline PhaseSpaceFunction basis_function(const FiniteLCAGroup& group, const GroupElement& j,
                                         const GroupElement& k) {
  group.require_valid(j.residues);
  group.require_valid(k.residues);
  const std::size_t n = group.order();
  ComplexVector values = ComplexVector::Zero(static_cast<Eigen::Index>(n * n));
  for (std::size_t gi = 0; gi < n; ++gi) {
    const GroupElement g = group.element(gi);
    if (!(add(group, k, g) == j)) continue;
    for (std::size_t c = 0; c < n; ++c) {
      values(static_cast<Eigen::Index>(c * n + gi)) = char_eval(group, group.character(c), k);
    }
  }
  return {group, std::move(values)};
}

/// Σ w·(Tρ)·conj(Tσ); equals Tr(ρσ†).
inline Complex parseval_pairing(const FiniteLCAGroup& group, const Operator& rho, const Operator& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw StructuralError("parseval_pairing: operator sizes differ");
  }
  return hs_transform(group, rho).inner(hs_transform(group, sigma));
}

struct ReconstructionOptions {
  double vanishing_tol = 1e-10;
  double condition_limit = 1e8;
  double negativity_tol = 1e-8;
};

struct ReconstructionResult {
  Operator rho;
  /// max |input probability - probability predicted by rho|
  double residual = 0.0;
  double min_eigenvalue = 0.0;
  /// min_eigenvalue below -negativity_tol; rho is returned unclipped.
  bool negative = false;
  bool used_least_squares = false;
  /// max|T(fiducial)| / min|T(fiducial)|
  double condition = 1.0;
};

namespace detail {

// Probabilities w·⟨U_r ψ, ρ U_r ψ⟩ for every phase point r.
inline RealVector predicted_probabilities(const FiniteLCAGroup& group, const Operator& rho,
                                          const StateVector& psi) {
  const GroupTables t(group);
  const std::size_t n = group.order();
  const double w = group.weights().phase;
  RealVector out(static_cast<Eigen::Index>(n * n));
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t g = 0; g < n; ++g) {
      const StateVector v = apply_weyl(t, c, g, psi);
      out(static_cast<Eigen::Index>(c * n + g)) = w * v.dot(rho * v).real();
    }
  }
  return out;
}

// Dense fallback: solve Tr(ρ E_r) = d_r for vec(ρ) by SVD least squares.
inline Operator least_squares_state(const FiniteLCAGroup& group, const RealVector& density,
                                    const StateVector& psi) {
  const GroupTables t(group);
  const std::size_t n = group.order();
  const auto dim = static_cast<Eigen::Index>(n);
  Operator a(dim * dim, dim * dim);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t g = 0; g < n; ++g) {
      const StateVector v = apply_weyl(t, c, g, psi);
      const auto row = static_cast<Eigen::Index>(c * n + g);
      // Tr(ρ |v⟩⟨v|) = Σ_ij ρ_ij v_j conj(v_i)
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) a(row, i * dim + j) = v(j) * std::conj(v(i));
      }
    }
  }
  const ComplexVector rhs = density.cast<Complex>();
  const ComplexVector x = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  Operator rho(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) rho(i, j) = x(i * dim + j);
  }
  return rho;
}

}  // namespace detail

/// Linear-inversion tomography for the covariant POVM with pure fiducial ψ.
///
/// `probabilities` are outcome probabilities per phase point (summing to 1).
/// Writing d = probabilities / w for the density, its symplectic Fourier
/// transform factorizes as |G|·T(|ψ⟩⟨ψ|)(q)·Tr(ρU_q†), so ρ follows by division
/// wherever the fiducial transform is nonzero.
inline ReconstructionResult reconstruct_state(const FiniteLCAGroup& group, const RealVector& probabilities,
                                              const StateVector& fiducial,
                                              const ReconstructionOptions& opts = {}) {
  const std::size_t n = group.order();
  const auto dim = static_cast<Eigen::Index>(n);
  require_length(fiducial, dim, "reconstruct_state fiducial");
  if (static_cast<std::size_t>(probabilities.size()) != n * n) {
    throw StructuralError("reconstruct_state: need one probability per phase point");
  }
  require_unit(fiducial, 1e-8, "reconstruct_state fiducial");

  const PhaseSpaceFunction fid = hs_transform(group, projector(fiducial));
  std::vector<std::size_t> vanishing;
  double fmax = 0.0;
  double fmin = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < n * n; ++q) {
    const double m = std::abs(fid[q]);
    fmax = std::max(fmax, m);
    fmin = std::min(fmin, m);
    if (m <= opts.vanishing_tol) vanishing.push_back(q);
  }
  if (!vanishing.empty()) {
    const std::string msg = "fiducial is not informationally complete: its transform vanishes at " +
                            std::to_string(vanishing.size()) + " phase point(s)";
    throw ReconstructionError(msg, std::move(vanishing));
  }

  const double w = group.weights().phase;
  const RealVector density = probabilities / w;

  ReconstructionResult result;
  result.condition = fmax / fmin;
  Operator rho;
  if (result.condition <= opts.condition_limit) {
    const Operator chars = character_table(group);
    // d arranged as (χ_r, g_r)
    Operator d(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
      for (Eigen::Index g = 0; g < dim; ++g) d(c, g) = density(c * dim + g);
    }
    // Σ_r χ_q(g_r)·conj(χ_r(g_q))·d(r), as (C · (C^H d)^T)[χ_q, g_q]
    const Operator step = chars.adjoint() * d;
    const Operator sym = chars * step.transpose();
    ComplexVector t_adj(dim * dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
      for (Eigen::Index g = 0; g < dim; ++g) {
        const Eigen::Index q = c * dim + g;
        const Complex tr_rho_udag = sym(c, g) / (static_cast<double>(n) * fid[static_cast<std::size_t>(q)]);
        t_adj(q) = std::conj(tr_rho_udag);  // T(ρ†)(q)
      }
    }
    rho = hs_inverse(group, PhaseSpaceFunction(group, std::move(t_adj))).adjoint();
  } else {
    rho = detail::least_squares_state(group, density, fiducial);
    result.used_least_squares = true;
  }

  rho = hermitian_part(rho);
  const double tr = rho.trace().real();
  if (std::abs(tr) > 0.0) rho /= tr;
  result.min_eigenvalue = min_eigenvalue(rho);
  result.negative = result.min_eigenvalue < -opts.negativity_tol;
  result.residual = (detail::predicted_probabilities(group, rho, fiducial) - probabilities).cwiseAbs().maxCoeff();
  result.rho = std::move(rho);
  return result;
}

}  // namespace cpovm
