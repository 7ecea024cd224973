#include <gtest/gtest.h>

#include "strongcert/gridscan.hpp"
#include "strongcert/hermite.hpp"
#include "support.hpp"

using namespace strongcert;

namespace {

std::vector<TrigPoly> constants(std::initializer_list<double> c, int m = 1) {
  std::vector<TrigPoly> p;
  for (double v : c) p.push_back(TrigPoly::constant(m, v));
  return p;
}

double lambda_min(const HermiteMatrix& H, const TorusPoint& th) {
  const ComplexMatrix E = eval_matrix(H.H, th);
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(0.5 * (E + E.adjoint())).eigenvalues()(0);
}

// Roots of det(z0 I + sum_k H_k z_k / gamma) are the eigenvalues of -sum_k H_k z_k / gamma.
double root_radius(const DelaySystem& s, const TorusPoint& th, double gamma) {
  const ComplexMatrix A = s.combination(th, +1) / gamma;
  return Eigen::ComplexEigenSolver<ComplexMatrix>(A).eigenvalues().cwiseAbs().maxCoeff();
}

bool pd_on_grid(const HermiteMatrix& H, int N) {
  for (int i = 0; i < N; ++i)
    if (lambda_min(H, {2.0 * testsupport::kPi * i / N}) <= 0.0) return false;
  return true;
}

}  // namespace

TEST(Hermite, ScalarExample) {
  const HermiteMatrix H = build_hermite(constants({-0.5, 1.0}));
  ASSERT_EQ(H.H.dim(), 1);
  EXPECT_NEAR(eval_matrix(H.H, {0.3})(0, 0).real(), 0.75, 1e-14);
  EXPECT_EQ(H.H(0, 0).size(), 1u);
}

TEST(Hermite, QuadraticExample) {
  const HermiteMatrix H = build_hermite(constants({-0.25, 0.0, 1.0}));
  const ComplexMatrix E = eval_matrix(H.H, {1.1});
  EXPECT_LE((E - 0.9375 * ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
  // both roots +-0.5 inside the disk, so H must be positive definite
  EXPECT_TRUE(pointwise_stability_oracle(constants({-0.25, 0.0, 1.0}), {1.1}));
}

TEST(Hermite, ScalingMatchesDividedSystem) {
  std::mt19937_64 rng(31);
  const DelaySystem s = testsupport::random_system(rng, 3, 2, true);
  const double g = 0.7;
  const auto p = homogenize(sampledet(s));
  const auto ps = homogenize(sampledet(s.scaled(1.0 / g)));
  const auto sc = scale_coefficients(p, g);
  for (int j = 0; j <= 3; ++j) {
    const TrigPoly d = sc[j] - ps[j];
    for (const auto& [e, c] : d.coeffs()) EXPECT_LE(std::abs(c), 1e-10);
  }
}

TEST(Hermite, Section51PositiveDefiniteAtGammaOne) {
  const DelaySystem s = testsupport::s51();
  const HermiteMatrix H = build_hermite(homogenize(sampledet(s)), 1.0);
  ASSERT_TRUE(H.H.is_hermitian());
  std::mt19937_64 rng(100);
  for (int t = 0; t < 100; ++t) EXPECT_GT(lambda_min(H, testsupport::random_point(rng, 2)), 0.0);
}

TEST(Hermite, EntriesConjugateSymmetricAtCoefficientLevel) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 10; ++t) {
    const DelaySystem s = testsupport::random_system(rng, 1 + t % 4, 1 + t % 3, t % 2 == 0);
    const HermiteMatrix H = build_hermite(homogenize(sampledet(s)), 0.9);
    for (int i = 0; i < H.H.dim(); ++i)
      for (int j = 0; j < H.H.dim(); ++j) EXPECT_EQ(H.H(i, j), conj(H.H(j, i)));
  }
}

TEST(StabilityOracle, Examples) {
  EXPECT_TRUE(pointwise_stability_oracle(constants({-0.5, 1.0}), {2.0}, 1.0));
  EXPECT_FALSE(pointwise_stability_oracle(constants({-0.5, 1.0}), {2.0}, 0.4));
  EXPECT_NEAR(max_root_modulus(constants({-0.5, 1.0}), {2.0}, 0.4), 1.25, 1e-12);
}

TEST(StabilityOracle, Section51AtScanArgmax) {
  const DelaySystem s = testsupport::s51();
  ScanConfig cfg;
  cfg.N = 360;
  const ScanResult r = scan(s, cfg);
  const auto p = homogenize(sampledet(s));
  const TorusPoint z = to_polynomial_point(r.argmax);
  EXPECT_FALSE(pointwise_stability_oracle(p, z, 0.750));
  EXPECT_NEAR(max_root_modulus(p, z, 1.0), r.gamma0_estimate, 1e-9);
}

TEST(Hermite, OracleEquivalence) {
  std::mt19937_64 rng(500);
  std::uniform_real_distribution<double> ug(0.3, 1.5);
  int compared = 0, disagreements = 0;
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + t % 4, m = 1 + (t / 4) % 3;
    const DelaySystem s = testsupport::random_system(rng, n, m, t % 2 == 1);
    const TorusPoint th = testsupport::random_point(rng, m);
    const double g = ug(rng);
    const double rho = root_radius(s, th, g);
    if (std::abs(rho - 1.0) < 1e-6) continue;
    ++compared;
    const HermiteMatrix H = build_hermite(homogenize(sampledet(s)), g);
    const bool pd = lambda_min(H, th) > 0.0;
    if (pd != (rho < 1.0)) ++disagreements;
    EXPECT_NEAR(max_root_modulus(homogenize(sampledet(s)), th, g), rho, 1e-8 * (1.0 + rho));
  }
  EXPECT_EQ(disagreements, 0);
  EXPECT_GT(compared, 480);
}

TEST(Hermite, GammaMonotonicity) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 20; ++t) {
    const DelaySystem s = testsupport::random_system(rng, 2, 2, true);
    const auto p = homogenize(sampledet(s));
    std::vector<TorusPoint> pts;
    for (int i = 0; i < 30; ++i) pts.push_back(testsupport::random_point(rng, 2));
    auto all_pd = [&](double g) {
      const HermiteMatrix H = build_hermite(p, g);
      for (const auto& th : pts)
        if (lambda_min(H, th) <= 0.0) return false;
      return true;
    };
    for (double g = 0.2; g < 2.0; g += 0.1)
      if (all_pd(g)) EXPECT_TRUE(all_pd(g * 1.05)) << "gamma " << g;
  }
}

TEST(Hermite, SingleDelayInfimumIsSpectralRadius) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 5; ++t) {
    const DelaySystem s = testsupport::random_system(rng, 1 + t % 3, 1, t % 2 == 0);
    const double r = Eigen::ComplexEigenSolver<ComplexMatrix>(s.H[0]).eigenvalues().cwiseAbs().maxCoeff();
    const auto p = homogenize(sampledet(s));
    double lo = 0.01, hi = 4.0;
    while (hi - lo > 1e-5) {
      const double mid = 0.5 * (lo + hi);
      (pd_on_grid(build_hermite(p, mid), 360) ? hi : lo) = mid;
    }
    EXPECT_NEAR(hi, r, 1e-3);
  }
}
