#include "strongcert/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace strongcert {

const NumericConfig& numeric_defaults() {
  static const NumericConfig cfg{};
  return cfg;
}

EigenvalueResult eigenvalues(const ComplexMatrix& a) {
  EigenvalueResult out;
  if (a.rows() == 0 || a.rows() != a.cols()) return out;
  if (!a.allFinite()) return out;
  Eigen::ComplexSchur<ComplexMatrix> schur(a.rows());
  schur.setMaxIterations(numeric_defaults().qr_sweeps_per_row * a.rows());
  schur.compute(a, /*computeU=*/false);
  if (schur.info() != Eigen::Success) return out;
  const auto& t = schur.matrixT();
  out.values.reserve(a.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) out.values.push_back(t(i, i));
  out.converged = true;
  return out;
}

std::optional<double> spectral_radius(const ComplexMatrix& a) {
  auto ev = eigenvalues(a);
  if (!ev.converged) return std::nullopt;
  double r = 0.0;
  for (const auto& l : ev.values) r = std::max(r, std::abs(l));
  return r;
}

HermitianEig hermitian_eigs(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_eigs: matrix is not square");
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  if (asym > numeric_defaults().hermitian_tol * scale)
    throw std::invalid_argument("hermitian_eigs: matrix is not Hermitian (asymmetry " +
                                std::to_string(asym) + ")");
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eigs: QR iteration failed");
  return {es.eigenvalues(), es.eigenvectors().col(0)};
}

double min_hermitian_eigenvalue(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CholeskyResult cholesky(const ComplexMatrix& a) {
  const Eigen::Index n = a.rows();
  CholeskyResult out;
  ComplexMatrix l = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    std::complex<double> s = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) s -= l(j, k) * std::conj(l(j, k));
    if (!(s.real() > 0.0) || !std::isfinite(s.real())) {
      out.failed_pivot = static_cast<int>(j + 1);
      return out;
    }
    const double d = std::sqrt(s.real());
    l(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      std::complex<double> t = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) t -= l(i, k) * std::conj(l(j, k));
      l(i, j) = t / d;
    }
  }
  out.positive_definite = true;
  out.lower = std::move(l);
  return out;
}

std::vector<std::complex<double>> roots_via_companion(const std::vector<std::complex<double>>& p) {
  if (p.empty() || p.back() == std::complex<double>{})
    throw std::invalid_argument("roots_via_companion: zero leading coefficient");
  const int d = static_cast<int>(p.size()) - 1;
  if (d == 0) return {};
  ComplexMatrix c = ComplexMatrix::Zero(d, d);
  for (int i = 1; i < d; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) c(i, d - 1) = -p[i] / p.back();
  auto ev = eigenvalues(c);
  if (!ev.converged) throw std::runtime_error("roots_via_companion: QR iteration did not converge");
  return ev.values;
}

}  // namespace strongcert
