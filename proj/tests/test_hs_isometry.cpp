#include <gtest/gtest.h>

#include "cpovm/hs_isometry.hpp"
#include "cpovm/random.hpp"
#include "oracles.hpp"

using namespace cpovm;

namespace {

const std::vector<std::vector<int>> kGroups{{2}, {3}, {4}, {6}, {8}, {3, 2}, {2, 2, 2}};

// Σ w·⟨U_r ψ, ρ U_r ψ⟩ via dense oracle matrices.
RealVector oracle_probabilities(const std::vector<int>& m, const Operator& rho, const StateVector& psi) {
  const std::size_t n = oracle::order(m);
  RealVector p(static_cast<Eigen::Index>(n * n));
  for (std::size_t i = 0; i < n * n; ++i) {
    const StateVector v = oracle::weyl_at(m, i) * psi;
    p(static_cast<Eigen::Index>(i)) = v.dot(rho * v).real() / static_cast<double>(n);
  }
  return p;
}

}  // namespace

TEST(HsIsometry, TransformIsTraceAgainstWeylMatrices) {
  Rng rng(1);
  for (const auto& m : kGroups) {
    const FiniteLCAGroup g(m);
    const Operator a = random_operator(static_cast<Eigen::Index>(g.order()), rng);
    const PhaseSpaceFunction f = hs_transform(g, a);
    ASSERT_EQ(f.size(), phase_point_count(g));
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_LT(std::abs(f[i] - (a * oracle::weyl_at(m, i)).trace()), 1e-12);
    }
  }
}

TEST(HsIsometry, QubitTransformExamples) {
  const FiniteLCAGroup z2({2});
  Operator zero = Operator::Zero(2, 2);
  zero(0, 0) = 1.0;
  const PhaseSpaceFunction f = hs_transform(z2, zero);
  // order (χ0,0),(χ0,1),(χ1,0),(χ1,1)
  EXPECT_EQ(f[0], Complex(1.0));
  EXPECT_EQ(f[1], Complex(0.0));
  EXPECT_EQ(f[2], Complex(1.0));
  EXPECT_EQ(f[3], Complex(0.0));

  const PhaseSpaceFunction mixed = hs_transform(z2, Operator::Identity(2, 2) / 2.0);
  EXPECT_LT(std::abs(mixed[0] - 1.0), 1e-15);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LT(std::abs(mixed[i]), 1e-15);

  const PhaseSpaceFunction nothing = hs_transform(z2, Operator::Zero(2, 2));
  EXPECT_EQ(nothing.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(HsIsometry, MaximallyMixedIsDeltaAtTrivialPoint) {
  for (const auto& m : kGroups) {
    const FiniteLCAGroup g(m);
    const auto n = static_cast<Eigen::Index>(g.order());
    const PhaseSpaceFunction f = hs_transform(g, Operator::Identity(n, n) / static_cast<double>(n));
    ComplexVector expect = ComplexVector::Zero(n * n);
    expect(0) = 1.0;
    EXPECT_LT(max_abs(f.values() - expect), 1e-13);
  }
}

TEST(HsIsometry, InverseExamples) {
  const FiniteLCAGroup z2({2});
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = 1.0;
  EXPECT_LT(max_abs(hs_inverse(z2, PhaseSpaceFunction(z2, v)) - Operator::Identity(2, 2) / 2.0), 1e-15);
  EXPECT_EQ(max_abs(hs_inverse(z2, PhaseSpaceFunction::zero(z2))), 0.0);
}

TEST(HsIsometry, InverseIsWeightedAdjointSum) {
  Rng rng(6);
  const std::vector<int> m{3, 2};
  const FiniteLCAGroup g(m);
  std::normal_distribution<double> normal;
  ComplexVector v(36);
  for (auto& z : v) z = {normal(rng), normal(rng)};
  Operator expect = Operator::Zero(6, 6);
  for (std::size_t i = 0; i < 36; ++i) expect += v(static_cast<Eigen::Index>(i)) * oracle::weyl_at(m, i).adjoint() / 6.0;
  EXPECT_LT(max_abs(hs_inverse(g, PhaseSpaceFunction(g, v)) - expect), 1e-13);
}

TEST(HsIsometry, RoundTripsBothWays) {
  Rng rng(2);
  for (const auto& m : kGroups) {
    const FiniteLCAGroup g(m);
    const auto n = static_cast<Eigen::Index>(g.order());
    const Operator a = random_operator(n, rng);
    EXPECT_LT(max_abs(hs_inverse(g, hs_transform(g, a)) - a), 1e-11);
    std::normal_distribution<double> normal;
    ComplexVector v(n * n);
    for (auto& z : v) z = {normal(rng), normal(rng)};
    const PhaseSpaceFunction f(g, v);
    EXPECT_LT(max_abs(hs_transform(g, hs_inverse(g, f)).values() - v), 1e-11);
  }
}

TEST(HsIsometry, ParsevalIdentity) {
  Rng rng(3);
  for (const auto& m : std::vector<std::vector<int>>{{2}, {3}, {4}, {6}, {8}}) {
    const FiniteLCAGroup g(m);
    for (int t = 0; t < 20; ++t) {
      const Operator a = random_operator(static_cast<Eigen::Index>(g.order()), rng);
      const double hs = (a.adjoint() * a).trace().real();
      EXPECT_LT(std::abs(hs_transform(g, a).norm_squared() - hs) / hs, 1e-11);
    }
  }
}

TEST(HsIsometry, TransformIsLinear) {
  Rng rng(7);
  const FiniteLCAGroup g({4});
  const Operator a = random_operator(4, rng);
  const Operator b = random_operator(4, rng);
  const Complex s{0.3, -1.2};
  const ComplexVector lhs = hs_transform(g, a + s * b).values();
  const ComplexVector rhs = hs_transform(g, a).values() + s * hs_transform(g, b).values();
  EXPECT_LT(max_abs(lhs - rhs), 1e-12);
}

TEST(HsIsometry, CovarianceOfModulus) {
  Rng rng(9);
  const FiniteLCAGroup g({3, 2});
  const Operator rho = random_density_matrix(6, 3, rng);
  const PhaseSpaceFunction base = hs_transform(g, rho);
  for (std::size_t pi = 0; pi < phase_point_count(g); ++pi) {
    const PhasePoint p = phase_point(g, pi);
    const PhaseSpaceFunction moved = hs_transform(g, conjugate_state(g, p, rho));
    // Tr(UρU† V) = Tr(ρ U†VU) and U†VU is a unimodular multiple of V
    for (std::size_t q = 0; q < base.size(); ++q) EXPECT_NEAR(std::abs(moved[q]), std::abs(base[q]), 1e-12);
  }
}

TEST(HsIsometry, BasisFunctionExamples) {
  const FiniteLCAGroup z2({2});
  const PhaseSpaceFunction f00 = basis_function(z2, z2.identity(), z2.identity());
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(f00[i], phase_point(z2, i).g.residues[0] == 0 ? Complex(1.0) : Complex(0.0));
  }
  const FiniteLCAGroup z3({3});
  const PhaseSpaceFunction f01 = basis_function(z3, z3.element(0), z3.element(1));
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(f01[c * 3 + 0], Complex(0.0));
}

TEST(HsIsometry, BasisFunctionsMatchTransformOfMatrixUnits) {
  const FiniteLCAGroup g({3, 2});
  for (std::size_t j = 0; j < g.order(); ++j) {
    for (std::size_t k = 0; k < g.order(); ++k) {
      Operator e = Operator::Zero(6, 6);
      e(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = 1.0;
      const PhaseSpaceFunction f = basis_function(g, g.element(j), g.element(k));
      EXPECT_LT(max_abs(f.values() - hs_transform(g, e).values()), 1e-14);
    }
  }
}

TEST(HsIsometry, BasisFunctionsAreOrthonormal) {
  for (const auto& m : std::vector<std::vector<int>>{{2}, {3}, {4}, {2, 2}}) {
    const FiniteLCAGroup g(m);
    const std::size_t n = g.order();
    std::vector<PhaseSpaceFunction> basis;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) basis.push_back(basis_function(g, g.element(j), g.element(k)));
    Operator gram(static_cast<Eigen::Index>(n * n), static_cast<Eigen::Index>(n * n));
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = 0; b < basis.size(); ++b)
        gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = basis[a].inner(basis[b]);
    EXPECT_LT(max_abs(gram - Operator::Identity(gram.rows(), gram.cols())), 1e-12);
  }
}

TEST(HsIsometry, ParsevalPairingExamples) {
  const FiniteLCAGroup z2({2});
  Operator zero = Operator::Zero(2, 2);
  zero(0, 0) = 1.0;
  Operator one = Operator::Zero(2, 2);
  one(1, 1) = 1.0;
  EXPECT_LT(std::abs(parseval_pairing(z2, zero, zero) - 1.0), 1e-15);
  EXPECT_LT(std::abs(parseval_pairing(z2, zero, one)), 1e-15);

  Rng rng(4);
  for (const auto& m : kGroups) {
    const FiniteLCAGroup g(m);
    const auto n = static_cast<Eigen::Index>(g.order());
    const Operator a = random_operator(n, rng);
    const Operator b = random_operator(n, rng);
    const Complex direct = (a * b.adjoint()).trace();
    EXPECT_LT(std::abs(parseval_pairing(g, a, b) - direct) / (a.norm() * b.norm()), 1e-11);
  }
  EXPECT_THROW(parseval_pairing(z2, zero, Operator::Zero(3, 3)), StructuralError);
}

TEST(HsIsometry, ReconstructionRoundTrip) {
  Rng rng(10);
  for (const auto& m : std::vector<std::vector<int>>{{2}, {3}, {4}, {6}, {8}, {2, 2}}) {
    const FiniteLCAGroup g(m);
    const auto n = static_cast<Eigen::Index>(g.order());
    const StateVector psi = random_state_vector(n, rng);
    const Operator rho = random_density_matrix(n, n, rng);
    const ReconstructionResult r = reconstruct_state(g, oracle_probabilities(m, rho, psi), psi);
    EXPECT_FALSE(r.used_least_squares);
    EXPECT_LT(max_abs(r.rho - rho), 1e-9);
    EXPECT_LT(r.residual, 1e-9);
    EXPECT_FALSE(r.negative);
  }
}

TEST(HsIsometry, ReconstructionLeastSquaresFallbackAgrees) {
  Rng rng(12);
  const std::vector<int> m{3};
  const FiniteLCAGroup g(m);
  const StateVector psi = random_state_vector(3, rng);
  const Operator rho = random_density_matrix(3, 2, rng);
  ReconstructionOptions opts;
  opts.condition_limit = 0.0;
  const ReconstructionResult r = reconstruct_state(g, oracle_probabilities(m, rho, psi), psi, opts);
  EXPECT_TRUE(r.used_least_squares);
  EXPECT_LT(max_abs(r.rho - rho), 1e-9);
}

TEST(HsIsometry, UniformStatisticsGiveMaximallyMixed) {
  Rng rng(13);
  for (const auto& m : std::vector<std::vector<int>>{{3}, {4}, {3, 2}}) {
    const FiniteLCAGroup g(m);
    const auto n = static_cast<Eigen::Index>(g.order());
    const StateVector psi = random_state_vector(n, rng);
    const RealVector uniform = RealVector::Constant(n * n, 1.0 / static_cast<double>(n * n));
    const ReconstructionResult r = reconstruct_state(g, uniform, psi);
    EXPECT_LT(max_abs(r.rho - Operator::Identity(n, n) / static_cast<double>(n)), 1e-12);
  }
}

TEST(HsIsometry, DeltaFiducialIsNotInformationallyComplete) {
  const FiniteLCAGroup z2({2});
  StateVector delta = StateVector::Zero(2);
  delta(0) = 1.0;
  const RealVector p = RealVector::Constant(4, 0.25);
  try {
    reconstruct_state(z2, p, delta);
    FAIL() << "expected ReconstructionError";
  } catch (const ReconstructionError& e) {
    // F(χ, g=1) = 0 for both characters: indices 1 and 3
    EXPECT_EQ(e.vanishing_points(), (std::vector<std::size_t>{1, 3}));
    EXPECT_NE(std::string(e.what()).find("2 phase point"), std::string::npos);
  }
}

TEST(HsIsometry, NegativeReconstructionIsReportedNotClipped) {
  Rng rng(14);
  const std::vector<int> m{3};
  const FiniteLCAGroup g(m);
  const StateVector psi = random_state_vector(3, rng);
  // statistics of a non-positive Hermitian unit-trace matrix
  Operator fake = Operator::Zero(3, 3);
  fake(0, 0) = 1.3;
  fake(1, 1) = -0.3;
  const ReconstructionResult r = reconstruct_state(g, oracle_probabilities(m, fake, psi), psi);
  EXPECT_TRUE(r.negative);
  EXPECT_NEAR(r.min_eigenvalue, -0.3, 1e-9);
  EXPECT_LT(max_abs(r.rho - fake), 1e-9);
}

TEST(HsIsometry, ReconstructionRejectsBadShapes) {
  const FiniteLCAGroup g({3});
  StateVector psi = StateVector::Constant(3, 1.0 / std::sqrt(3.0));
  EXPECT_THROW(reconstruct_state(g, RealVector::Zero(4), psi), StructuralError);
  EXPECT_THROW(reconstruct_state(g, RealVector::Zero(9), StateVector::Ones(2)), StructuralError);
  EXPECT_THROW(reconstruct_state(g, RealVector::Zero(9), StateVector::Ones(3)), ValidationError);
}
