#pragma once

// Covariant POVM generated by the orbit of a fiducial state:
//
//   E(χ,g) = w · U_{χ,g} ρ0 U_{χ,g}†,   Σ_{χ,g} E(χ,g) = I,
//   U_p E(q) U_p† = E(p·q).
//
// Effects are stored already multiplied by the point weight w = 1/|G|.

#include <algorithm>
#include <span>
#include <vector>

#include "cpovm/hs_isometry.hpp"
#include "cpovm/linalg.hpp"
#include "cpovm/weyl_repr.hpp"

namespace cpovm {

class CovariantPOVM {
 public:
  const FiniteLCAGroup& group() const noexcept { return group_; }
  const Operator& fiducial() const noexcept { return fiducial_; }
  double weight() const noexcept { return group_.weights().phase; }
  std::size_t size() const noexcept { return effects_.size(); }

  const Operator& effect(std::size_t index) const { return effects_.at(index); }
  const Operator& effect(const PhasePoint& p) const { return effects_.at(phase_index(group_, p)); }
  const std::vector<Operator>& effects() const noexcept { return effects_; }

 private:
  CovariantPOVM(FiniteLCAGroup group, Operator fiducial, std::vector<Operator> effects)
      : group_(std::move(group)), fiducial_(std::move(fiducial)), effects_(std::move(effects)) {}

  friend CovariantPOVM build_povm(const FiniteLCAGroup&, const Operator&);

  FiniteLCAGroup group_;
  Operator fiducial_;
  std::vector<Operator> effects_;
};

inline CovariantPOVM build_povm(const FiniteLCAGroup& group, const Operator& fiducial) {
  require_square(fiducial, static_cast<Eigen::Index>(group.order()), "build_povm fiducial");
  require_density_matrix(fiducial, 1e-10, "build_povm fiducial");
  const double w = group.weights().phase;
  std::vector<Operator> effects;
  effects.reserve(phase_point_count(group));
  for (std::size_t i = 0; i < phase_point_count(group); ++i) {
    effects.push_back(w * conjugate_state(group, phase_point(group, i), fiducial));
  }
  return {group, fiducial, std::move(effects)};
}

inline CovariantPOVM build_povm(const FiniteLCAGroup& group, const StateVector& fiducial) {
  require_length(fiducial, static_cast<Eigen::Index>(group.order()), "build_povm fiducial");
  return build_povm(group, Operator(projector(fiducial)));
}

/// 𝔐(B) = Σ_{p∈B} E(p). Repeated indices count once.
inline Operator effect_of_subset(const CovariantPOVM& povm, std::span<const std::size_t> subset) {
  const auto n = static_cast<Eigen::Index>(povm.group().order());
  std::vector<char> seen(povm.size(), 0);
  Operator out = Operator::Zero(n, n);
  for (std::size_t idx : subset) {
    if (idx >= povm.size()) throw StructuralError("effect_of_subset: phase point index out of range");
    if (seen[idx]) continue;
    seen[idx] = 1;
    out += povm.effect(idx);
  }
  return out;
}

inline Operator effect_of_subset(const CovariantPOVM& povm, const std::vector<PhasePoint>& subset) {
  std::vector<std::size_t> idx;
  idx.reserve(subset.size());
  for (const auto& p : subset) idx.push_back(phase_index(povm.group(), p));
  return effect_of_subset(povm, std::span<const std::size_t>(idx));
}

/// ‖Σ E - I‖_max
inline double completeness_error(const CovariantPOVM& povm) {
  const auto n = static_cast<Eigen::Index>(povm.group().order());
  Operator total = Operator::Zero(n, n);
  for (const auto& e : povm.effects()) total += e;
  return max_abs(total - Operator::Identity(n, n));
}

inline double min_effect_eigenvalue(const CovariantPOVM& povm) {
  double lmin = std::numeric_limits<double>::infinity();
  for (const auto& e : povm.effects()) lmin = std::min(lmin, min_eigenvalue(e));
  return lmin;
}

/// max-entry distance between U_p E(q) U_p† and E(p·q), using dense Weyl matrices.
inline double covariance_deviation(const CovariantPOVM& povm, const PhasePoint& p, const PhasePoint& q) {
  const Operator u = weyl_matrix(povm.group(), p).matrix;
  const Operator moved = u * povm.effect(q) * u.adjoint();
  return max_abs(moved - povm.effect(translate(povm.group(), p, q)));
}

struct CovarianceReport {
  double max_deviation = 0.0;
  std::size_t worst_point = 0;  // phase index of q attaining max_deviation
  std::size_t checked = 0;
};

/// Checks U_p E(q) U_p† = E(p·q) for every q.
inline CovarianceReport verify_covariance(const CovariantPOVM& povm, const PhasePoint& p) {
  const FiniteLCAGroup& group = povm.group();
  const Operator u = weyl_matrix(group, p).matrix;
  const Operator ud = u.adjoint();
  CovarianceReport report;
  for (std::size_t i = 0; i < povm.size(); ++i) {
    const PhasePoint q = phase_point(group, i);
    const double dev = max_abs(u * povm.effect(i) * ud - povm.effect(translate(group, p, q)));
    if (dev > report.max_deviation || report.checked == 0) {
      report.max_deviation = dev;
      report.worst_point = i;
    }
    ++report.checked;
  }
  return report;
}

/// Distance between the POVM of Σ π_j|ψ_j⟩⟨ψ_j| and Σ π_j·POVM(|ψ_j⟩⟨ψ_j|),
/// maximized over effects.
inline double convexity_deviation(const FiniteLCAGroup& group, std::span<const double> weights,
                                  std::span<const StateVector> vectors) {
  if (weights.size() != vectors.size() || weights.empty()) {
    throw StructuralError("convexity_deviation: need matching non-empty weights and vectors");
  }
  const auto n = static_cast<Eigen::Index>(group.order());
  Operator mixed = Operator::Zero(n, n);
  std::vector<CovariantPOVM> parts;
  parts.reserve(vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    mixed += weights[j] * projector(vectors[j]);
    parts.push_back(build_povm(group, vectors[j]));
  }
  const CovariantPOVM whole = build_povm(group, mixed);
  double dev = 0.0;
  for (std::size_t i = 0; i < whole.size(); ++i) {
    Operator combo = Operator::Zero(n, n);
    for (std::size_t j = 0; j < parts.size(); ++j) combo += weights[j] * parts[j].effect(i);
    dev = std::max(dev, max_abs(whole.effect(i) - combo));
  }
  return dev;
}

/// (Vξ)(χ,g) = ⟨U_{χ,g} ψ, ξ⟩
inline PhaseSpaceFunction coherent_transform(const FiniteLCAGroup& group, const StateVector& fiducial,
                                             const StateVector& xi) {
  const auto n = static_cast<Eigen::Index>(group.order());
  require_length(fiducial, n, "coherent_transform fiducial");
  require_length(xi, n, "coherent_transform vector");
  require_unit(fiducial, 1e-10, "coherent_transform fiducial");
  require_unit(xi, 1e-10, "coherent_transform vector");
  const detail::GroupTables t(group);
  const std::size_t order = group.order();
  ComplexVector values(static_cast<Eigen::Index>(order * order));
  for (std::size_t c = 0; c < order; ++c) {
    for (std::size_t g = 0; g < order; ++g) {
      values(static_cast<Eigen::Index>(c * order + g)) = detail::apply_weyl(t, c, g, fiducial).dot(xi);
    }
  }
  return {group, std::move(values)};
}

/// Σ w·F(χ,g)·U_{χ,g}ψ; inverts coherent_transform.
inline StateVector coherent_synthesis(const FiniteLCAGroup& group, const StateVector& fiducial,
                                      const PhaseSpaceFunction& f) {
  const auto n = static_cast<Eigen::Index>(group.order());
  require_length(fiducial, n, "coherent_synthesis fiducial");
  const detail::GroupTables t(group);
  const std::size_t order = group.order();
  const double w = group.weights().phase;
  StateVector out = StateVector::Zero(n);
  for (std::size_t c = 0; c < order; ++c) {
    for (std::size_t g = 0; g < order; ++g) {
      out += w * f[c * order + g] * detail::apply_weyl(t, c, g, fiducial);
    }
  }
  return out;
}

}  // namespace cpovm
