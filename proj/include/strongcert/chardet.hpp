#pragma once

// Characteristic polynomial q(z) = det(I + sum_k H_k z_k) of a delay
// difference equation, recovered from samples on a roots-of-unity grid.

#include <vector>

#include "strongcert/numerics.hpp"
#include "strongcert/trigpoly.hpp"

namespace strongcert {

/// x(t) + sum_k H_k x(t - tau_k) = 0 with n states and m delays.
struct DelaySystem {
  int n = 0;
  int m = 0;
  std::vector<ComplexMatrix> H;

  DelaySystem() = default;
  explicit DelaySystem(std::vector<ComplexMatrix> matrices);
  static DelaySystem from_real(const std::vector<Eigen::MatrixXd>& matrices);

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
  bool is_real() const;

  /// sum_k H_k exp(sign * i theta_k).
  ComplexMatrix combination(const TorusPoint& theta, int sign = +1) const;
  DelaySystem scaled(double c) const;
};

/// Dehomogenized characteristic polynomial (z_0 = 1); constant term 1.
struct CharPoly {
  TrigPoly q;
  int n;
};

CharPoly sampledet(const DelaySystem& sys);

/// p_0..p_n with p_j holding the monomials of q of total degree n - j, so that
/// sum_j p_j(z) z_0^j = det(z_0 I + sum_k H_k z_k).
std::vector<TrigPoly> homogenize(const CharPoly& q);

}  // namespace strongcert
