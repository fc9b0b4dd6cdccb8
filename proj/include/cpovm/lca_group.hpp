#pragma once

// Finite Abelian groups G = Z_{n1} x ... x Z_{nk}, their characters, and the
// Plancherel-normalized Fourier pair between L2(G) and L2(dual G).
//
// Haar weights: counting measure on G, 1/|G| per character on the dual group.
// With this choice the Fourier transform below is unitary and the covariant
// POVM built in covariant_povm.hpp sums to the identity without extra factors.

#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "cpovm/types.hpp"

namespace cpovm {

/// Element of G as residues, residues[j] in [0, n_j).
struct GroupElement {
  std::vector<int> residues;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// Character of G as residues x_j in [0, n_j); evaluates as exp(2πi Σ x_j g_j / n_j).
struct Character {
  std::vector<int> residues;
  friend bool operator==(const Character&, const Character&) = default;
};

struct HaarWeights {
  double group = 1.0;
  double dual = 1.0;
  double phase = 1.0;  // product weight on dual x G
};

class FiniteLCAGroup {
 public:
  static constexpr std::size_t kMaxOrder = std::size_t{1} << 24;

  explicit FiniteLCAGroup(std::vector<int> moduli) : moduli_(std::move(moduli)) {
    if (moduli_.empty()) throw StructuralError("group needs at least one modulus");
    std::size_t order = 1;
    std::int64_t exponent = 1;
    for (int n : moduli_) {
      if (n < 2) throw StructuralError("modulus " + std::to_string(n) + " is below 2");
      order *= static_cast<std::size_t>(n);
      if (order > kMaxOrder) throw StructuralError("group order exceeds supported size");
      exponent = std::lcm(exponent, static_cast<std::int64_t>(n));
    }
    order_ = order;
    exponent_ = exponent;
    strides_.assign(moduli_.size(), 1);
    for (std::size_t j = moduli_.size() - 1; j > 0; --j) {
      strides_[j - 1] = strides_[j] * static_cast<std::size_t>(moduli_[j]);
    }
  }

  const std::vector<int>& moduli() const noexcept { return moduli_; }
  std::size_t rank() const noexcept { return moduli_.size(); }
  std::size_t order() const noexcept { return order_; }
  /// Least common multiple of the moduli; every character value is an exponent()-th root of unity.
  std::int64_t exponent() const noexcept { return exponent_; }

  HaarWeights weights() const noexcept {
    const double inv = 1.0 / static_cast<double>(order_);
    return {1.0, inv, inv};
  }

  bool valid(const std::vector<int>& residues) const noexcept {
    if (residues.size() != moduli_.size()) return false;
    for (std::size_t j = 0; j < residues.size(); ++j) {
      if (residues[j] < 0 || residues[j] >= moduli_[j]) return false;
    }
    return true;
  }
  bool contains(const GroupElement& g) const noexcept { return valid(g.residues); }
  bool contains(const Character& chi) const noexcept { return valid(chi.residues); }

  /// Componentwise reduction into [0, n_j); accepts negative input.
  std::vector<int> reduce(const std::vector<int>& raw) const {
    check_rank(raw.size());
    std::vector<int> out(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) {
      const int n = moduli_[j];
      out[j] = ((raw[j] % n) + n) % n;
    }
    return out;
  }

  /// Lexicographic index, first modulus most significant.
  std::size_t index_of(const std::vector<int>& residues) const {
    require_valid(residues);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < residues.size(); ++j) {
      idx += static_cast<std::size_t>(residues[j]) * strides_[j];
    }
    return idx;
  }
  std::size_t index_of(const GroupElement& g) const { return index_of(g.residues); }
  std::size_t index_of(const Character& chi) const { return index_of(chi.residues); }

  std::vector<int> residues_at(std::size_t index) const {
    if (index >= order_) throw StructuralError("index out of range for group");
    std::vector<int> r(moduli_.size());
    for (std::size_t j = 0; j < moduli_.size(); ++j) {
      r[j] = static_cast<int>((index / strides_[j]) % static_cast<std::size_t>(moduli_[j]));
    }
    return r;
  }
  GroupElement element(std::size_t index) const { return {residues_at(index)}; }
  Character character(std::size_t index) const { return {residues_at(index)}; }
  GroupElement identity() const { return {std::vector<int>(moduli_.size(), 0)}; }
  Character trivial_character() const { return {std::vector<int>(moduli_.size(), 0)}; }

  void require_valid(const std::vector<int>& residues) const {
    check_rank(residues.size());
    if (!valid(residues)) throw StructuralError("residue out of range for group moduli");
  }

  friend bool operator==(const FiniteLCAGroup& a, const FiniteLCAGroup& b) {
    return a.moduli_ == b.moduli_;
  }

 private:
  void check_rank(std::size_t n) const {
    if (n != moduli_.size()) {
      throw StructuralError("expected " + std::to_string(moduli_.size()) +
                            " residues, got " + std::to_string(n));
    }
  }

  std::vector<int> moduli_;
  std::vector<std::size_t> strides_;
  std::size_t order_ = 1;
  std::int64_t exponent_ = 1;
};

inline GroupElement add(const FiniteLCAGroup& group, const GroupElement& a, const GroupElement& b) {
  group.require_valid(a.residues);
  group.require_valid(b.residues);
  std::vector<int> sum(a.residues.size());
  for (std::size_t j = 0; j < sum.size(); ++j) {
    sum[j] = (a.residues[j] + b.residues[j]) % group.moduli()[j];
  }
  return {std::move(sum)};
}

inline GroupElement negate(const FiniteLCAGroup& group, const GroupElement& a) {
  group.require_valid(a.residues);
  std::vector<int> out(a.residues.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = (group.moduli()[j] - a.residues[j]) % group.moduli()[j];
  }
  return {std::move(out)};
}

/// Pointwise product χχ' of characters (addition of residues).
inline Character multiply(const FiniteLCAGroup& group, const Character& a, const Character& b) {
  GroupElement s = add(group, GroupElement{a.residues}, GroupElement{b.residues});
  return {std::move(s.residues)};
}

/// k in [0, exponent) with χ(g) = exp(2πi k / exponent).
inline std::int64_t pairing_exponent(const FiniteLCAGroup& group, const std::vector<int>& x,
                                     const std::vector<int>& g) {
  const std::int64_t big = group.exponent();
  std::int64_t k = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const std::int64_t n = group.moduli()[j];
    k += (static_cast<std::int64_t>(x[j]) * g[j] % n) * (big / n);
  }
  return k % big;
}

/// exp(2πi k / n), folded so that quarter turns come out exact.
inline Complex root_of_unity(std::int64_t k, std::int64_t n) {
  k %= n;
  if (k < 0) k += n;
  if (4 * k % n == 0) {
    switch (4 * k / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return std::polar(1.0, angle);
}

inline Complex char_eval(const FiniteLCAGroup& group, const Character& chi, const GroupElement& g) {
  group.require_valid(chi.residues);
  group.require_valid(g.residues);
  return root_of_unity(pairing_exponent(group, chi.residues, g.residues), group.exponent());
}

/// table(χ, g) = χ(g), rows indexed by characters, columns by elements.
/// The canonical pairing is symmetric, so the table is a symmetric matrix.
inline Operator character_table(const FiniteLCAGroup& group) {
  const auto n = static_cast<Eigen::Index>(group.order());
  const std::int64_t big = group.exponent();
  std::vector<std::vector<int>> res(group.order());
  for (std::size_t i = 0; i < group.order(); ++i) res[i] = group.residues_at(i);
  Operator table(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      const Complex v = root_of_unity(pairing_exponent(group, res[a], res[b]), big);
      table(a, b) = v;
      table(b, a) = v;
    }
  }
  return table;
}

/// F(f)(χ) = Σ_g conj(χ(g)) f(g) with unit weight on G.
inline ComplexVector fourier(const FiniteLCAGroup& group, const ComplexVector& f) {
  if (static_cast<std::size_t>(f.size()) != group.order()) {
    throw StructuralError("fourier: input length does not match group order");
  }
  return character_table(group).conjugate() * f * group.weights().group;
}

/// F^{-1}(f̂)(g) = Σ_χ χ(g) f̂(χ) with weight 1/|G| on the dual group.
inline ComplexVector inverse_fourier(const FiniteLCAGroup& group, const ComplexVector& fhat) {
  if (static_cast<std::size_t>(fhat.size()) != group.order()) {
    throw StructuralError("inverse_fourier: input length does not match group order");
  }
  // table is symmetric: Σ_χ table(χ, g) f̂(χ) = (table * f̂)(g)
  return character_table(group) * fhat * group.weights().dual;
}

}  // namespace cpovm
