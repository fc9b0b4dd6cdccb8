#pragma once

// The two hybrid channels attached to a covariant POVM with pure fiducial ψ.
//
//   measurement  Φ(ρ):  density p_ρ(χ,g) = ⟨U_{χ,g}ψ, ρ U_{χ,g}ψ⟩ w.r.t. the weight w
//   ensemble     Ψ(ρ):  (χ,g) ↦ p_ρ(χ,g) · |U_{χ,g}ψ⟩⟨U_{χ,g}ψ|
//
// and the embedding W ξ = (χ,g) ↦ ⟨U_{χ,g}ψ, ξ⟩ U_{χ,g}ψ whose diagonal blocks
// reproduce both. All entropies are in nats.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cpovm/linalg.hpp"
#include "cpovm/weyl_repr.hpp"

namespace cpovm {

inline constexpr double kStateTolerance = 1e-8;
inline constexpr double kDensityFloor = 1e-8;

/// Outcome density on dual(G) x G; probability of a point is density·weight.
class ProbabilityDensity {
 public:
  ProbabilityDensity(FiniteLCAGroup group, RealVector density)
      : group_(std::move(group)), density_(std::move(density)) {
    if (static_cast<std::size_t>(density_.size()) != phase_point_count(group_)) {
      throw StructuralError("probability density needs one value per phase point");
    }
  }

  const FiniteLCAGroup& group() const noexcept { return group_; }
  const RealVector& density() const noexcept { return density_; }
  double weight() const noexcept { return group_.weights().phase; }
  RealVector probabilities() const { return density_ * weight(); }

 private:
  FiniteLCAGroup group_;
  RealVector density_;
};

/// Posterior ensemble (π_{χ,g}, |U_{χ,g}ψ⟩⟨U_{χ,g}ψ|); π is a density w.r.t. the weight.
class PosteriorEnsemble {
 public:
  PosteriorEnsemble(FiniteLCAGroup group, RealVector pi, std::vector<StateVector> posteriors)
      : group_(std::move(group)), pi_(std::move(pi)), posteriors_(std::move(posteriors)) {
    if (static_cast<std::size_t>(pi_.size()) != phase_point_count(group_) ||
        posteriors_.size() != phase_point_count(group_)) {
      throw StructuralError("ensemble needs one weight and one posterior per phase point");
    }
  }

  const FiniteLCAGroup& group() const noexcept { return group_; }
  const RealVector& pi() const noexcept { return pi_; }
  const std::vector<StateVector>& posteriors() const noexcept { return posteriors_; }
  Operator state(std::size_t index) const { return projector(posteriors_.at(index)); }

  /// Σ w·π·ρ_{χ,g}
  Operator average_state() const {
    const auto n = static_cast<Eigen::Index>(group_.order());
    Operator avg = Operator::Zero(n, n);
    const double w = group_.weights().phase;
    for (std::size_t i = 0; i < posteriors_.size(); ++i) {
      avg += w * pi_(static_cast<Eigen::Index>(i)) * projector(posteriors_[i]);
    }
    return avg;
  }

 private:
  FiniteLCAGroup group_;
  RealVector pi_;
  std::vector<StateVector> posteriors_;
};

namespace detail {

inline std::vector<StateVector> orbit(const FiniteLCAGroup& group, const StateVector& psi) {
  const GroupTables t(group);
  const std::size_t n = group.order();
  std::vector<StateVector> out;
  out.reserve(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t g = 0; g < n; ++g) out.push_back(apply_weyl(t, c, g, psi));
  }
  return out;
}

inline void check_channel_inputs(const FiniteLCAGroup& group, const StateVector& psi, const Operator& rho) {
  const auto n = static_cast<Eigen::Index>(group.order());
  require_length(psi, n, "fiducial");
  require_square(rho, n, "state");
  require_unit(psi, kStateTolerance, "fiducial");
  require_density_matrix(rho, kStateTolerance, "state");
}

inline RealVector orbit_density(const std::vector<StateVector>& orbit, const Operator& rho) {
  RealVector d(static_cast<Eigen::Index>(orbit.size()));
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    d(static_cast<Eigen::Index>(i)) = orbit[i].dot(rho * orbit[i]).real();
  }
  return d;
}

}  // namespace detail

inline ProbabilityDensity measure(const FiniteLCAGroup& group, const StateVector& fiducial, const Operator& rho) {
  detail::check_channel_inputs(group, fiducial, rho);
  return {group, detail::orbit_density(detail::orbit(group, fiducial), rho)};
}

inline PosteriorEnsemble ensemble_channel(const FiniteLCAGroup& group, const StateVector& fiducial,
                                          const Operator& rho) {
  detail::check_channel_inputs(group, fiducial, rho);
  std::vector<StateVector> posteriors = detail::orbit(group, fiducial);
  RealVector pi = detail::orbit_density(posteriors, rho);
  return {group, std::move(pi), std::move(posteriors)};
}

/// -Σ w·p·log p. Relative to the weight w, so it can be negative.
inline double classical_entropy(const ProbabilityDensity& p) {
  const double w = p.weight();
  double s = 0.0;
  for (double d : p.density()) {
    if (d < -kDensityFloor) throw ValidationError("classical_entropy: negative density " + std::to_string(d));
    if (d > 0.0) s -= w * d * std::log(d);
  }
  return s;
}

/// -Σ w·Tr(σ log σ) with σ(χ,g) = π(χ,g)·ρ_{χ,g}.
inline double ensemble_entropy(const PosteriorEnsemble& e) {
  const double w = e.group().weights().phase;
  double s = 0.0;
  for (std::size_t i = 0; i < e.posteriors().size(); ++i) {
    const double pi = e.pi()(static_cast<Eigen::Index>(i));
    if (pi < -kDensityFloor) throw ValidationError("ensemble_entropy: negative weight " + std::to_string(pi));
    if (pi <= 0.0) continue;
    s += w * entropy_of_psd(pi * e.state(i), kDensityFloor, "ensemble_entropy");
  }
  return s;
}

inline double von_neumann_entropy(const Operator& rho) {
  if (rho.rows() != rho.cols()) throw StructuralError("von_neumann_entropy: matrix is not square");
  require_density_matrix(rho, kStateTolerance, "von_neumann_entropy");
  const RealVector evals = hermitian_eigenvalues(rho);
  double s = 0.0;
  for (double lambda : evals) {
    const double l = std::clamp(lambda, 0.0, 1.0);
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

/// S(average state) - Σ w·π·S(ρ_{χ,g})
inline double holevo_quantity(const PosteriorEnsemble& e) {
  const double w = e.group().weights().phase;
  double avg_entropy = 0.0;
  for (std::size_t i = 0; i < e.posteriors().size(); ++i) {
    const double pi = e.pi()(static_cast<Eigen::Index>(i));
    if (pi <= 0.0) continue;
    avg_entropy += w * pi * von_neumann_entropy(e.state(i));
  }
  return von_neumann_entropy(e.average_state()) - avg_entropy;
}

/// Image of a vector under W: one block vector per phase point.
class EmbeddingImage {
 public:
  EmbeddingImage(FiniteLCAGroup group, std::vector<StateVector> blocks)
      : group_(std::move(group)), blocks_(std::move(blocks)) {}

  const FiniteLCAGroup& group() const noexcept { return group_; }
  const std::vector<StateVector>& blocks() const noexcept { return blocks_; }

  /// ⟨this, other⟩ = Σ w·⟨block, other block⟩
  Complex inner(const EmbeddingImage& other) const {
    if (other.blocks_.size() != blocks_.size()) throw StructuralError("embedding images differ in size");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < blocks_.size(); ++i) acc += blocks_[i].dot(other.blocks_[i]);
    return acc * group_.weights().phase;
  }

 private:
  FiniteLCAGroup group_;
  std::vector<StateVector> blocks_;
};

/// [Wξ](χ,g) = ⟨U_{χ,g}ψ, ξ⟩·U_{χ,g}ψ. Linear in ξ; ψ must be a unit vector.
inline EmbeddingImage embedding_w(const FiniteLCAGroup& group, const StateVector& fiducial, const StateVector& xi) {
  const auto n = static_cast<Eigen::Index>(group.order());
  require_length(fiducial, n, "embedding_w fiducial");
  require_length(xi, n, "embedding_w vector");
  require_unit(fiducial, kStateTolerance, "embedding_w fiducial");
  std::vector<StateVector> blocks = detail::orbit(group, fiducial);
  for (auto& v : blocks) v *= v.dot(xi);
  return {group, std::move(blocks)};
}

/// Diagonal blocks [WρW†](χ,g) = W_{χ,g} ρ W_{χ,g}† with W_{χ,g} = |U_{χ,g}ψ⟩⟨U_{χ,g}ψ|.
inline std::vector<Operator> embedding_blocks(const FiniteLCAGroup& group, const StateVector& fiducial,
                                              const Operator& rho) {
  detail::check_channel_inputs(group, fiducial, rho);
  std::vector<Operator> out;
  for (const StateVector& v : detail::orbit(group, fiducial)) {
    const Operator wr = projector(v);
    out.push_back(wr * rho * wr.adjoint());
  }
  return out;
}

struct ComplementarityReport {
  double partial_trace_dev = 0.0;  // max |Tr[WρW†](χ,g) - p_ρ(χ,g)|
  double channel_dev = 0.0;        // max ‖[WρW†](χ,g) - Ψ(ρ)(χ,g)‖_max
  double entropy_dev = 0.0;        // |S(Φ(ρ)) - S(Ψ(ρ))|
  double entropy_measurement = 0.0;
  double entropy_ensemble = 0.0;
};

/// Checks the three complementarity identities for ρ = |ξ⟩⟨ξ|.
inline ComplementarityReport verify_complementarity(const FiniteLCAGroup& group, const StateVector& fiducial,
                                                    const StateVector& xi) {
  require_unit(xi, kStateTolerance, "verify_complementarity vector");
  const Operator rho = projector(xi);
  const ProbabilityDensity p = measure(group, fiducial, rho);
  const PosteriorEnsemble e = ensemble_channel(group, fiducial, rho);
  const EmbeddingImage image = embedding_w(group, fiducial, xi);

  ComplementarityReport r;
  for (std::size_t i = 0; i < image.blocks().size(); ++i) {
    const Operator block = projector(image.blocks()[i]);  // diagonal block of |Wξ⟩⟨Wξ|
    const auto ii = static_cast<Eigen::Index>(i);
    r.partial_trace_dev = std::max(r.partial_trace_dev, std::abs(block.trace() - Complex{p.density()(ii), 0.0}));
    r.channel_dev = std::max(r.channel_dev, max_abs(block - e.pi()(ii) * e.state(i)));
  }
  r.entropy_measurement = classical_entropy(p);
  r.entropy_ensemble = ensemble_entropy(e);
  r.entropy_dev = std::abs(r.entropy_measurement - r.entropy_ensemble);
  return r;
}

inline double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

}  // namespace cpovm
