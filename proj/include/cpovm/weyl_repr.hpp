#pragma once

// Projective representation of dual(G) x G on L2(G) ≅ C^{|G|}:
//
//   [U_{χ,g} f](h) = χ(h) f(h+g)
//
// In the delta basis U has entries U[h, h'] = χ(h)·[h' = h+g]: a permutation
// followed by a diagonal phase. Multiplying two of them gives
//
//   U_{χ,g} U_{χ',g'} = χ'(g) · U_{χχ', g+g'}
//
// which is what substitution into the action above produces.

#include <vector>

#include "cpovm/lca_group.hpp"
#include "cpovm/linalg.hpp"

namespace cpovm {

/// A point (χ, g) of dual(G) x G. `weight` is the Haar weight 1/|G| of the point.
struct PhasePoint {
  Character chi;
  GroupElement g;
  double weight = 1.0;

  friend bool operator==(const PhasePoint& a, const PhasePoint& b) {
    return a.chi == b.chi && a.g == b.g;
  }
};

struct WeylOperator {
  Operator matrix;
  PhasePoint point;
};

struct ProductLaw {
  Complex phase;
  PhasePoint point;
};

inline std::size_t phase_point_count(const FiniteLCAGroup& group) {
  return group.order() * group.order();
}

/// Phase points are ordered lexicographically by (χ residues, g residues):
/// index = index(χ)·|G| + index(g).
inline PhasePoint phase_point(const FiniteLCAGroup& group, std::size_t index) {
  const std::size_t n = group.order();
  if (index >= n * n) throw StructuralError("phase point index out of range");
  return {group.character(index / n), group.element(index % n), group.weights().phase};
}

inline PhasePoint make_phase_point(const FiniteLCAGroup& group, Character chi, GroupElement g) {
  group.require_valid(chi.residues);
  group.require_valid(g.residues);
  return {std::move(chi), std::move(g), group.weights().phase};
}

inline std::size_t phase_index(const FiniteLCAGroup& group, const PhasePoint& p) {
  return group.index_of(p.chi) * group.order() + group.index_of(p.g);
}

inline PhasePoint identity_point(const FiniteLCAGroup& group) {
  return {group.trivial_character(), group.identity(), group.weights().phase};
}

/// Group law on dual(G) x G: (χ, g)·(χ', g') = (χχ', g+g').
inline PhasePoint translate(const FiniteLCAGroup& group, const PhasePoint& p, const PhasePoint& q) {
  return {multiply(group, p.chi, q.chi), add(group, p.g, q.g), group.weights().phase};
}

namespace detail {

// Precomputed index arithmetic for repeated application over all phase points.
struct GroupTables {
  explicit GroupTables(const FiniteLCAGroup& group)
      : order(group.order()), chars(character_table(group)), sum(order * order) {
    std::vector<GroupElement> elems;
    elems.reserve(order);
    for (std::size_t i = 0; i < order; ++i) elems.push_back(group.element(i));
    for (std::size_t a = 0; a < order; ++a) {
      for (std::size_t b = 0; b < order; ++b) {
        sum[a * order + b] = group.index_of(add(group, elems[a], elems[b]));
      }
    }
  }

  std::size_t plus(std::size_t a, std::size_t b) const { return sum[a * order + b]; }
  Complex chi(std::size_t c, std::size_t h) const {
    return chars(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(h));
  }

  std::size_t order;
  Operator chars;
  std::vector<std::size_t> sum;
};

// (U f)(h) = χ(h) f(h+g), indices only.
inline StateVector apply_weyl(const GroupTables& t, std::size_t chi, std::size_t g,
                              const StateVector& f) {
  StateVector out(static_cast<Eigen::Index>(t.order));
  for (std::size_t h = 0; h < t.order; ++h) {
    out(static_cast<Eigen::Index>(h)) = t.chi(chi, h) * f(static_cast<Eigen::Index>(t.plus(h, g)));
  }
  return out;
}

}  // namespace detail

inline WeylOperator weyl_matrix(const FiniteLCAGroup& group, const PhasePoint& p) {
  group.require_valid(p.chi.residues);
  group.require_valid(p.g.residues);
  const auto n = static_cast<Eigen::Index>(group.order());
  Operator m = Operator::Zero(n, n);
  for (std::size_t h = 0; h < group.order(); ++h) {
    const GroupElement elem = group.element(h);
    const auto col = static_cast<Eigen::Index>(group.index_of(add(group, elem, p.g)));
    m(static_cast<Eigen::Index>(h), col) = char_eval(group, p.chi, elem);
  }
  return {std::move(m), PhasePoint{p.chi, p.g, group.weights().phase}};
}

/// U_{p} f without materializing the matrix.
inline StateVector apply_weyl(const FiniteLCAGroup& group, const PhasePoint& p, const StateVector& f) {
  require_length(f, static_cast<Eigen::Index>(group.order()), "apply_weyl");
  group.require_valid(p.chi.residues);
  group.require_valid(p.g.residues);
  StateVector out(f.size());
  for (std::size_t h = 0; h < group.order(); ++h) {
    const GroupElement elem = group.element(h);
    out(static_cast<Eigen::Index>(h)) =
        char_eval(group, p.chi, elem) *
        f(static_cast<Eigen::Index>(group.index_of(add(group, elem, p.g))));
  }
  return out;
}

/// U_p U_q = phase · U_{p·q}, with phase = χ_q(g_p).
inline ProductLaw weyl_product_phase(const FiniteLCAGroup& group, const PhasePoint& p,
                                     const PhasePoint& q) {
  return {char_eval(group, q.chi, p.g), translate(group, p, q)};
}

/// U ρ U†, computed entrywise: (U ρ U†)[h,k] = χ(h) ρ[h+g, k+g] conj(χ(k)).
inline Operator conjugate_state(const FiniteLCAGroup& group, const PhasePoint& p, const Operator& rho) {
  const auto n = static_cast<Eigen::Index>(group.order());
  require_square(rho, n, "conjugate_state");
  group.require_valid(p.chi.residues);
  group.require_valid(p.g.residues);
  std::vector<Complex> phase(group.order());
  std::vector<Eigen::Index> shifted(group.order());
  for (std::size_t h = 0; h < group.order(); ++h) {
    const GroupElement elem = group.element(h);
    phase[h] = char_eval(group, p.chi, elem);
    shifted[h] = static_cast<Eigen::Index>(group.index_of(add(group, elem, p.g)));
  }
  Operator out(n, n);
  for (Eigen::Index h = 0; h < n; ++h) {
    for (Eigen::Index k = 0; k < n; ++k) {
      out(h, k) = phase[h] * rho(shifted[h], shifted[k]) * std::conj(phase[k]);
    }
  }
  return out;
}

}  // namespace cpovm
