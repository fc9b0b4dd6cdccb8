#include <gtest/gtest.h>

#include "cpovm/lca_group.hpp"
#include "cpovm/random.hpp"
#include "oracles.hpp"

using namespace cpovm;

namespace {

const std::vector<std::vector<int>> kGroups{{2}, {3}, {4}, {3, 2}, {2, 2}, {2, 4}, {6}, {2, 3, 2}, {5, 3}};

ComplexVector random_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal;
  ComplexVector v(n);
  for (auto& z : v) z = {normal(rng), normal(rng)};
  return v;
}

}  // namespace

TEST(LcaGroup, RejectsBadModuli) {
  EXPECT_THROW(FiniteLCAGroup({}), StructuralError);
  EXPECT_THROW(FiniteLCAGroup({1}), StructuralError);
  EXPECT_THROW(FiniteLCAGroup({3, 0}), StructuralError);
  EXPECT_THROW(FiniteLCAGroup({-2}), StructuralError);
}

TEST(LcaGroup, OrderWeightsAndIndexing) {
  const FiniteLCAGroup g({3, 2});
  EXPECT_EQ(g.order(), 6u);
  EXPECT_EQ(g.exponent(), 6);
  EXPECT_DOUBLE_EQ(g.weights().group, 1.0);
  EXPECT_DOUBLE_EQ(g.weights().dual, 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(g.weights().phase, 1.0 / 6.0);
  for (std::size_t i = 0; i < g.order(); ++i) {
    EXPECT_EQ(g.residues_at(i), oracle::digits({3, 2}, i));
    EXPECT_EQ(g.index_of(g.residues_at(i)), i);
  }
  EXPECT_THROW(g.index_of(std::vector<int>{3, 0}), StructuralError);
  EXPECT_THROW(g.index_of(std::vector<int>{1}), StructuralError);
}

TEST(LcaGroup, AddExamples) {
  const FiniteLCAGroup z2({2});
  EXPECT_EQ(add(z2, GroupElement{{1}}, GroupElement{{1}}), GroupElement{{0}});

  const FiniteLCAGroup g({3, 2});
  EXPECT_EQ(add(g, GroupElement{{2, 1}}, GroupElement{{2, 1}}), (GroupElement{{1, 0}}));
  for (std::size_t i = 0; i < g.order(); ++i) EXPECT_EQ(add(g, g.element(i), g.identity()), g.element(i));
}

TEST(LcaGroup, AddRejectsRankMismatch) {
  const FiniteLCAGroup g({3, 2});
  EXPECT_THROW(add(g, GroupElement{{1}}, GroupElement{{1, 0}}), StructuralError);
}

TEST(LcaGroup, NegateIsInverse) {
  const FiniteLCAGroup g({4, 3});
  for (std::size_t i = 0; i < g.order(); ++i) {
    EXPECT_EQ(add(g, g.element(i), negate(g, g.element(i))), g.identity());
  }
}

TEST(LcaGroup, CharEvalExamples) {
  const FiniteLCAGroup z2({2});
  EXPECT_EQ(char_eval(z2, Character{{1}}, GroupElement{{1}}), Complex(-1.0, 0.0));
  const FiniteLCAGroup z4({4});
  EXPECT_EQ(char_eval(z4, Character{{1}}, GroupElement{{1}}), Complex(0.0, 1.0));
  const FiniteLCAGroup g({3, 2});
  for (std::size_t i = 0; i < g.order(); ++i) {
    EXPECT_EQ(char_eval(g, g.trivial_character(), g.element(i)), Complex(1.0, 0.0));
  }
}

TEST(LcaGroup, CharEvalMatchesDirectExponential) {
  for (const auto& m : kGroups) {
    const FiniteLCAGroup g(m);
    for (std::size_t c = 0; c < g.order(); ++c) {
      for (std::size_t h = 0; h < g.order(); ++h) {
        const Complex v = char_eval(g, g.character(c), g.element(h));
        EXPECT_LT(std::abs(v - oracle::character(m, c, h)), 1e-15);
        EXPECT_NEAR(std::abs(v), 1.0, 1e-15);
      }
    }
  }
}

TEST(LcaGroup, HomomorphismProperty) {
  Rng rng(11);
  for (const auto& m : kGroups) {
    const FiniteLCAGroup g(m);
    std::uniform_int_distribution<std::size_t> pick(0, g.order() - 1);
    for (int t = 0; t < 50; ++t) {
      const Character chi = g.character(pick(rng));
      const GroupElement a = g.element(pick(rng));
      const GroupElement b = g.element(pick(rng));
      EXPECT_LT(std::abs(char_eval(g, chi, add(g, a, b)) - char_eval(g, chi, a) * char_eval(g, chi, b)), 1e-14);
    }
  }
}

TEST(LcaGroup, CharacterOrthogonality) {
  for (const auto& m : kGroups) {
    const FiniteLCAGroup g(m);
    const Operator t = character_table(g);
    const auto n = static_cast<double>(g.order());
    const Operator gram = t * t.adjoint();
    EXPECT_LT(max_abs(gram - n * Operator::Identity(t.rows(), t.cols())), 1e-12);
  }
}

TEST(LcaGroup, DoubleDualSymmetry) {
  for (const auto& m : kGroups) {
    const FiniteLCAGroup g(m);
    for (std::size_t a = 0; a < g.order(); ++a) {
      for (std::size_t b = 0; b < g.order(); ++b) {
        EXPECT_EQ(char_eval(g, g.character(a), g.element(b)), char_eval(g, g.character(b), g.element(a)));
      }
    }
  }
}

TEST(LcaGroup, FourierExamples) {
  const FiniteLCAGroup z2({2});
  ComplexVector delta0(2);
  delta0 << 1.0, 0.0;
  ComplexVector ones(2);
  ones << 1.0, 1.0;
  EXPECT_LT(max_abs(fourier(z2, delta0) - ones), 1e-15);
  ComplexVector two0(2);
  two0 << 2.0, 0.0;
  EXPECT_LT(max_abs(fourier(z2, ones) - two0), 1e-15);
  EXPECT_LT(max_abs(inverse_fourier(z2, ones) - delta0), 1e-15);

  for (int n : {3, 5, 8}) {
    const FiniteLCAGroup zn({n});
    const ComplexVector f = fourier(zn, ComplexVector::Ones(n));
    ComplexVector expect = ComplexVector::Zero(n);
    expect(0) = static_cast<double>(n);
    EXPECT_LT(max_abs(f - expect), 1e-13);
  }

  const FiniteLCAGroup z3({3});
  ComplexVector d(3);
  d << 1.0, 0.0, 0.0;
  EXPECT_LT(max_abs(inverse_fourier(z3, d) - ComplexVector::Constant(3, 1.0 / 3.0)), 1e-15);
}

TEST(LcaGroup, FourierMatchesDirectSum) {
  Rng rng(5);
  for (const auto& m : kGroups) {
    const FiniteLCAGroup g(m);
    const ComplexVector f = random_vector(static_cast<Eigen::Index>(g.order()), rng);
    EXPECT_LT(max_abs(fourier(g, f) - oracle::dft(m, f)), 1e-12);
  }
}

TEST(LcaGroup, FourierRoundTripAndPlancherel) {
  Rng rng(3);
  for (const auto& m : std::vector<std::vector<int>>{{6}, {2, 3, 2}, {8, 8}, {4, 4, 4}, {7, 9}}) {
    const FiniteLCAGroup g(m);
    const ComplexVector f = random_vector(static_cast<Eigen::Index>(g.order()), rng);
    const ComplexVector fhat = fourier(g, f);
    EXPECT_LT(max_abs(inverse_fourier(g, fhat) - f), 1e-12);
    const double lhs = g.weights().dual * fhat.squaredNorm();
    const double rhs = g.weights().group * f.squaredNorm();
    EXPECT_LT(std::abs(lhs - rhs) / rhs, 1e-12);
  }
}

TEST(LcaGroup, FourierRejectsLengthMismatch) {
  const FiniteLCAGroup g({3});
  EXPECT_THROW(fourier(g, ComplexVector::Ones(4)), StructuralError);
  EXPECT_THROW(inverse_fourier(g, ComplexVector::Ones(2)), StructuralError);
}
