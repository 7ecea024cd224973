#include <gtest/gtest.h>

#include "strongcert/trigpoly.hpp"
#include "support.hpp"

using namespace strongcert;
using testsupport::kPi;

namespace {

TrigPoly p1(std::initializer_list<std::pair<int, cplx>> terms) {
  TrigPoly p(1);
  for (const auto& [e, c] : terms) p.add_term({e}, c);
  return p;
}

}  // namespace

TEST(TrigPoly, AddUnionsCoefficients) {
  const TrigPoly s = p1({{1, 1.0}}) + p1({{-1, 1.0}});
  EXPECT_EQ(s, p1({{1, 1.0}, {-1, 1.0}}));
  EXPECT_EQ(s.size(), 2u);
}

TEST(TrigPoly, AddZeroIsIdentity) {
  const TrigPoly p = p1({{0, 2.0}, {3, cplx(0.5, -1.0)}});
  EXPECT_EQ(p + TrigPoly(1), p);
}

TEST(TrigPoly, AddCancelsToEmpty) {
  const TrigPoly s = p1({{0, 1.0}, {1, 1.0}}) + p1({{0, -1.0}, {1, -1.0}});
  EXPECT_TRUE(s.is_zero());
}

TEST(TrigPoly, MulExpandsProduct) {
  EXPECT_EQ(p1({{0, 1.0}, {1, 1.0}}) * p1({{0, 1.0}, {-1, 1.0}}), p1({{0, 2.0}, {1, 1.0}, {-1, 1.0}}));
}

TEST(TrigPoly, MulIdentityAndCancellation) {
  const TrigPoly p = p1({{2, cplx(1.0, 2.0)}, {-1, 0.25}});
  EXPECT_EQ(p * TrigPoly::constant(1, 1.0), p);
  EXPECT_EQ(p1({{1, 1.0}}) * p1({{-1, 1.0}}), TrigPoly::constant(1, 1.0));
}

TEST(TrigPoly, VariableCountMismatchThrows) {
  EXPECT_THROW(add(TrigPoly(1), TrigPoly(2)), std::invalid_argument);
  EXPECT_THROW(mul(TrigPoly(2), TrigPoly(1)), std::invalid_argument);
  EXPECT_THROW(eval(TrigPoly(2), TorusPoint{0.0}), std::invalid_argument);
}

TEST(TrigPoly, ConjMirrorsExponents) {
  EXPECT_EQ(conj(p1({{2, cplx(1.0, 3.0)}})), p1({{-2, cplx(1.0, -3.0)}}));
  const TrigPoly h = p1({{0, 2.0}, {1, 1.0}, {-1, 1.0}});
  EXPECT_EQ(conj(h), h);
  EXPECT_EQ(conj(p1({{0, cplx(0.0, 1.0)}, {1, 1.0}})), p1({{0, cplx(0.0, -1.0)}, {-1, 1.0}}));
}

TEST(TrigPoly, EvalExamples) {
  const TrigPoly h = p1({{0, 2.0}, {1, 1.0}, {-1, 1.0}});
  EXPECT_NEAR(std::abs(eval(h, {0.0}) - 4.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eval(h, {kPi})), 0.0, 1e-14);
  const TrigPoly z1z2 = TrigPoly::monomial({1, 1});
  EXPECT_NEAR(std::abs(eval(z1z2, {kPi / 2, kPi / 2}) - cplx(-1.0)), 0.0, 1e-14);
}

TEST(TrigPoly, PruneThresholdDropsTinyCoefficients) {
  TrigPoly p(1);
  p.add_term({1}, 5e-9);
  EXPECT_TRUE(p.is_zero());
  p.add_term({1}, 2e-8);
  EXPECT_EQ(p.size(), 1u);
}

TEST(TrigPolyMatrix, EvalMatrixExamples) {
  TrigPolyMatrix I(2, 1);
  I(0, 0) = TrigPoly::constant(1, 1.0);
  I(1, 1) = TrigPoly::constant(1, 1.0);
  EXPECT_TRUE(eval_matrix(I, {1.234}).isApprox(Eigen::MatrixXcd::Identity(2, 2)));

  TrigPolyMatrix h(1, 1);
  h(0, 0) = p1({{0, 2.0}, {1, 1.0}, {-1, 1.0}});
  EXPECT_NEAR(std::abs(eval_matrix(h, {kPi / 2})(0, 0) - 2.0), 0.0, 1e-14);
  EXPECT_THROW(eval_matrix(h, {0.0, 0.0}), std::invalid_argument);
}

TEST(TrigPolyMatrix, HermitianEvaluatesHermitian) {
  std::mt19937_64 rng(11);
  TrigPolyMatrix A(3, 2);
  for (int i = 0; i < 3; ++i) {
    A(i, i) = testsupport::random_real_trigpoly(rng, 2, 2);
    for (int j = i + 1; j < 3; ++j) {
      TrigPoly e(2);
      std::uniform_real_distribution<double> u(-1, 1);
      for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) e.add_term({a, b}, cplx(u(rng), u(rng)));
      A(i, j) = e;
      A(j, i) = conj(e);
    }
  }
  ASSERT_TRUE(A.is_hermitian());
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXcd E = eval_matrix(A, testsupport::random_point(rng, 2));
    EXPECT_LE((E - E.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(TrigPolyProperties, RealValuedHasNegligibleImaginaryPart) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const int m = 1 + t % 3;
    const TrigPoly h = testsupport::random_real_trigpoly(rng, m, 2);
    ASSERT_TRUE(h.is_real_valued(1e-14));
    const double tol = 1e-10 * h.coeff_l1_norm();
    for (int s = 0; s < 10; ++s) EXPECT_LE(std::abs(eval(h, testsupport::random_point(rng, m)).imag()), tol);
  }
}

TEST(TrigPolyProperties, MulCommutativeAssociativeAndMultiplicative) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  auto rnd = [&](int m) {
    TrigPoly p(m);
    for (int k = 0; k < 6; ++k) {
      MultiIndex a(m);
      for (int& e : a) e = static_cast<int>(std::floor(u(rng) * 3));
      p.add_term(a, cplx(u(rng), u(rng)));
    }
    return p;
  };
  auto close = [](const TrigPoly& a, const TrigPoly& b) {
    const TrigPoly d = a - b;
    double worst = 0.0;
    for (const auto& [e, c] : d.coeffs()) worst = std::max(worst, std::abs(c));
    return worst;
  };
  for (int t = 0; t < 30; ++t) {
    const int m = 1 + t % 2;
    const TrigPoly a = rnd(m), b = rnd(m), c = rnd(m);
    EXPECT_LE(close(a * b, b * a), 1e-12);
    EXPECT_LE(close((a * b) * c, a * (b * c)), 1e-8);
    const TorusPoint th = testsupport::random_point(rng, m);
    const cplx lhs = eval(a * b, th), rhs = eval(a, th) * eval(b, th);
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * (1.0 + std::abs(rhs)));
  }
}

TEST(TrigPolyProperties, ConjIsInvolution) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    TrigPoly p = testsupport::random_real_trigpoly(rng, 2, 2) + TrigPoly::monomial({1, -2}, cplx(0.3, 0.7));
    EXPECT_EQ(conj(conj(p)), p);
    const TorusPoint th = testsupport::random_point(rng, 2);
    EXPECT_LE(std::abs(eval(conj(p), th) - std::conj(eval(p, th))), 1e-12);
  }
}
