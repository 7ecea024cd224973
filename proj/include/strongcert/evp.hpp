#pragma once

// Upper bounds on the torus minimum of a Hermitian trigonometric polynomial
// (matrix) from the localizing matrix of the uniform torus measure. Its moments
// are the Kronecker delta, so the moment matrix is the identity and the bound
// of order k is the smallest eigenvalue of the multilevel Toeplitz matrix with
// blocks L(beta, gamma) = H_{beta - gamma}, beta, gamma in {0..k}^m.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "strongcert/hermite.hpp"
#include "strongcert/sosgram.hpp"
#include "strongcert/trigpoly.hpp"

namespace strongcert {

Eigen::MatrixXcd localizing_matrix(const TrigPolyMatrix& H, const MonomialBasis& basis);

struct UpperBound {
  int k = 0;
  double value = 0.0;      // h_bar_k
  Eigen::VectorXcd probe;  // eigenvector, ordered as (basis index, row)
  MonomialBasis basis;
};

/// Throws std::invalid_argument for non-Hermitian input or k < 1.
UpperBound upper_bound(const TrigPolyMatrix& H, int k);
UpperBound upper_bound(const TrigPoly& h, int k);

/// v(theta) = sum_gamma q_gamma e^{i gamma.theta}, one n-vector per point.
Eigen::VectorXcd probe_value(const UpperBound& ub, int n, const TorusPoint& theta);

struct EvpConfig {
  double negativity_tol = 1e-9;
  int max_matrix_size = 2500;  // orders whose localizing matrix is larger are skipped
  int witness_seeds = 8;
};

struct Refutation {
  int k = 0;
  double bound = 0.0;
  Eigen::VectorXcd probe;
  /// Torus point (polynomial convention z = e^{i theta}) with lambda_min(H) < 0, if found.
  std::optional<TorusPoint> witness;
  double witness_eigenvalue = 0.0;
};

struct DisproofResult {
  std::vector<double> bounds;  // h_bar_k for k = 1, 2, ... as far as computed
  std::optional<Refutation> refutation;
  int max_order_reached = 0;
};

DisproofResult disprove_positivity(const TrigPolyMatrix& H, int k_max, const EvpConfig& cfg = {});
inline DisproofResult disprove_positivity(const HermiteMatrix& H, int k_max, const EvpConfig& cfg = {}) {
  return disprove_positivity(H.H, k_max, cfg);
}

/// Local search for a torus point where lambda_min(H) < -tol, seeded by the probe.
std::optional<TorusPoint> find_negative_point(const TrigPolyMatrix& H, const UpperBound& ub, double tol,
                                              int seeds = 8);

}  // namespace strongcert
