#pragma once

// Order-k Gram (sum-of-squares) relaxation deciding positivity of a Hermitian
// trigonometric polynomial matrix H(z):
//
//   H(z) - h I = (b_k(z) (x) I_n)^H X (b_k(z) (x) I_n),   X psd,
//
// where b_k holds the monomials z^beta with 0 <= beta_i <= k. The complex
// Hermitian X of size S = (k+1)^m n is encoded by a real symmetric Y of size 2S
// through X = (Y11 + Y22) + i (Y21 - Y12), which is psd whenever Y is.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "strongcert/hermite.hpp"
#include "strongcert/sdpsolve.hpp"
#include "strongcert/trigpoly.hpp"

namespace strongcert {

struct MonomialBasis {
  int m = 0;
  int k = 0;
  std::vector<MultiIndex> monomials;  // graded lexicographic
};

MonomialBasis make_basis(int m, int k);

enum class RelaxationMode { Feasibility, MaximizeLowerBound };

/// One real equality: real or imaginary part of the z^alpha coefficient of entry (i,j).
struct ConstraintKey {
  MultiIndex alpha;
  int i;
  int j;
  bool imaginary;
};

struct SdpDims {
  long long N = 0;  // vectorized length of the real PSD block, (2S)^2
  int M = 0;        // equality constraints
  int S = 0;        // complex Gram block size (k+1)^m n
};

struct SdpProblem {
  ConicProblem conic;
  RelaxationMode mode = RelaxationMode::Feasibility;
  TrigPolyMatrix target{1, 1};
  MonomialBasis basis;
  int n = 0;
  SdpDims dims;
  /// Feasibility mode: key of every row. Lower-bound mode: rows 0..n-2 are the
  /// differences (diagonal i+1) - (diagonal 0) of the constant coefficient, and
  /// the remaining rows share the keys of the feasibility layout from row n on.
  std::vector<ConstraintKey> keys;
  double trace_constant = 0.0;  // trace of the z^0 coefficient of H
};

/// Throws std::invalid_argument when H is not Hermitian, k < 1, or the basis
/// cannot represent H (some per-variable exponent exceeds k).
SdpProblem build_relaxation(const TrigPolyMatrix& H, int k, RelaxationMode mode);
inline SdpProblem build_relaxation(const HermiteMatrix& H, int k, RelaxationMode mode) {
  return build_relaxation(H.H, k, mode);
}

/// Dimensions of build_relaxation(H, k, mode) without assembling it.
SdpDims relaxation_dims(const TrigPolyMatrix& H, int k, RelaxationMode mode);

/// Smallest order whose basis represents every monomial of H.
int minimal_order(const TrigPolyMatrix& H);

struct GramCertificate {
  Eigen::MatrixXcd X;
  MonomialBasis basis;
  double lower_bound = 0.0;
  double residual = 0.0;  // max coefficient mismatch
  double min_eigenvalue = 0.0;
  /// lower_bound minus the worst-case effect of the residual and of any
  /// negative eigenvalue of X: H(z) >= certified_margin I on the whole torus.
  double certified_margin = 0.0;
  int iterations = 0;
};

/// Dual improving direction for the feasibility problem (h = 0):
/// b.y > 0 while sum_i y_i A_i is negative semidefinite up to cone_residual.
struct FarkasRay {
  Eigen::VectorXd y;
  double b_dot_y = 0.0;
  double cone_residual = 0.0;  // max(0, lambda_max(sum y_i A_i)) / (b.y)
  std::optional<double> lower_bound;  // optimal h when obtained from the lower-bound problem
  int iterations = 0;
};

struct Indeterminate {
  std::string reason;
  SolverStatus solver_status = SolverStatus::IterationLimit;
};

using RelaxationOutcome = std::variant<GramCertificate, FarkasRay, Indeterminate>;

RelaxationOutcome solve_relaxation(const SdpProblem& p, const SolverConfig& cfg = {});

/// Certified lower bound h_k for each order in [k_min, k_max]; nullopt marks a gap.
std::vector<std::optional<double>> lower_bound_hierarchy(const TrigPolyMatrix& H, int k_min, int k_max,
                                                         const SolverConfig& cfg = {});

/// Max over alpha, (i,j) of |[B^H X B]_alpha(i,j) - H_alpha(i,j) + h delta|.
double gram_residual(const TrigPolyMatrix& H, const MonomialBasis& basis, const Eigen::MatrixXcd& X, double h);
/// Sum over alpha of the Frobenius norm of the coefficient mismatch; bounds the
/// spectral norm of the residual polynomial matrix anywhere on the torus.
double gram_error_bound(const TrigPolyMatrix& H, const MonomialBasis& basis, const Eigen::MatrixXcd& X, double h);

/// Complex Gram matrix encoded by a real symmetric block Y of size 2S.
Eigen::MatrixXcd complex_from_realified(const Eigen::MatrixXd& Y);
/// [[Re X, -Im X], [Im X, Re X]].
Eigen::MatrixXd realify(const Eigen::MatrixXcd& X);

// SDPA sparse format (.dat-s). The problem min <C,Y> s.t. <A_i,Y> = b_i is
// written as the SDPA dual: c := b, F_i := A_i, F_0 := -C.
void write_sdpa(const ConicProblem& p, std::ostream& out);
ConicProblem read_sdpa(std::istream& in);
void export_sdpa(const SdpProblem& p, const std::filesystem::path& path);
ConicProblem import_sdpa(const std::filesystem::path& path);

}  // namespace strongcert
