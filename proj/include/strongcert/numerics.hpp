#pragma once

// Dense linear algebra used throughout: complex eigenvalues, Hermitian
// eigendecomposition, Cholesky with pivot reporting, companion-matrix roots.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace strongcert {

using ComplexMatrix = Eigen::MatrixXcd;

/// Numerical tolerances shared across modules.
struct NumericConfig {
  double hermitian_tol = 1e-10;   // max |A - A^H| accepted as Hermitian (relative to 1+|A|)
  double eig_residual = 1e-8;     // |Av - lambda v| <= eig_residual * |A|
  int qr_sweeps_per_row = 30;     // shifted-QR iteration cap is this times n
};

const NumericConfig& numeric_defaults();

struct EigenvalueResult {
  std::vector<std::complex<double>> values;
  bool converged = false;
};

/// Hessenberg reduction followed by shifted complex QR.
EigenvalueResult eigenvalues(const ComplexMatrix& a);

/// Max |lambda|; nullopt when the QR iteration did not converge.
std::optional<double> spectral_radius(const ComplexMatrix& a);

struct HermitianEig {
  Eigen::VectorXd values;        // ascending
  Eigen::VectorXcd min_vector;   // unit eigenvector of values[0]
};

/// Throws std::invalid_argument when A is not Hermitian to numeric_defaults().hermitian_tol.
HermitianEig hermitian_eigs(const ComplexMatrix& a);

/// Smallest eigenvalue of a Hermitian matrix, without the symmetry check.
double min_hermitian_eigenvalue(const ComplexMatrix& a);

struct CholeskyResult {
  bool positive_definite = false;
  ComplexMatrix lower;   // valid when positive_definite
  int failed_pivot = 0;  // 1-based pivot where definiteness failed; 0 on success
};

/// Plain right-looking Cholesky; indefiniteness is reported, not thrown.
CholeskyResult cholesky(const ComplexMatrix& a);

/// Roots of p[0] + p[1] z + ... + p[d] z^d via companion eigenvalues.
/// Throws std::invalid_argument if p[d] == 0, std::runtime_error if QR fails.
std::vector<std::complex<double>> roots_via_companion(const std::vector<std::complex<double>>& p);

}  // namespace strongcert
