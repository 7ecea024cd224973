#pragma once

// Dense primal-dual interior-point solver for
//   min <C,X> + c_l.x   s.t.  <A_i,X> + a_il.x = b_i,  X psd,  x >= 0
//   max b.y             s.t.  Z = C - sum_i y_i A_i psd,  z = c_l - A_l^T y >= 0
// with one PSD block and an optional block of nonnegative scalars.

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace strongcert {

/// A(row,col) = A(col,row) = value; row <= col.
struct SymEntry {
  int row;
  int col;
  double value;
  friend bool operator==(const SymEntry&, const SymEntry&) = default;
};

/// Sparse symmetric block-diagonal matrix: a PSD-block part and a diagonal part.
struct SparseSym {
  std::vector<SymEntry> psd;
  std::vector<std::pair<int, double>> diag;
  friend bool operator==(const SparseSym&, const SparseSym&) = default;
};

struct ConicProblem {
  int psd_size = 0;
  int lp_size = 0;
  std::vector<SparseSym> A;
  std::vector<double> b;
  SparseSym C;
  friend bool operator==(const ConicProblem&, const ConicProblem&) = default;

  int num_constraints() const { return static_cast<int>(A.size()); }
  /// Throws std::invalid_argument on out-of-range or malformed entries.
  void validate() const;
};

struct SolverConfig {
  double feasibility_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iterations = 100;
  double infeasibility_threshold = 1e8;  // ray growth that triggers an infeasibility verdict
  double step_fraction = 0.98;
  int max_psd_size = 400;                // larger blocks are refused
};

enum class SolverStatus { Optimal, PrimalInfeasible, DualInfeasible, IterationLimit, Refused };

const char* to_string(SolverStatus s);

struct SolverResult {
  SolverStatus status = SolverStatus::IterationLimit;
  Eigen::MatrixXd X;
  Eigen::VectorXd x_lp;
  Eigen::VectorXd y;
  Eigen::MatrixXd Z;
  Eigen::VectorXd z_lp;
  /// PrimalInfeasible: y with b.y = 1 and sum_i y_i A_i negative semidefinite
  /// (to tolerance). DualInfeasible: a primal recession direction.
  Eigen::VectorXd ray;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;               // <X,Z> + x.z
  double primal_residual = 0.0;   // |b - A(X)| / (1 + |b|)
  double dual_residual = 0.0;     // |C - Z - A^T y| / (1 + |C|)
  int iterations = 0;
  std::vector<int> removed_rows;  // linearly dependent constraints dropped before solving
  std::string message;
};

SolverResult solve(const ConicProblem& p, const SolverConfig& cfg = {});

/// Post-hoc certificate check for an Optimal result, recomputed from the
/// problem data alone: X and Z = C - A^T y must pass Cholesky (with a
/// tolerance-sized shift) and the residuals must meet the tolerances.
bool check_optimal(const ConicProblem& p, const SolverResult& r, const SolverConfig& cfg, std::string* why = nullptr);

// Operators on problem data, shared with the relaxation module and tests.
double inner(const SparseSym& a, const Eigen::MatrixXd& x);
Eigen::VectorXd apply_A(const ConicProblem& p, const Eigen::MatrixXd& X, const Eigen::VectorXd& x_lp);
/// sum_i y_i A_i as a dense PSD-block matrix plus its diagonal part.
void apply_At(const ConicProblem& p, const Eigen::VectorXd& y, Eigen::MatrixXd& psd, Eigen::VectorXd& lp);
Eigen::MatrixXd dense_psd(const SparseSym& a, int size);

}  // namespace strongcert
