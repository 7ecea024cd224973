#pragma once

// Discrete-time (Schur-Cohn) Hermite matrix of the homogenized characteristic
// polynomial, as a Hermitian trigonometric polynomial matrix in z_1..z_m.

#include <vector>

#include "strongcert/trigpoly.hpp"

namespace strongcert {

struct HermiteMatrix {
  TrigPolyMatrix H;
  double gamma = 1.0;
};

/// Coefficients p_0..p_n (p_n == 1) scaled by p_j / gamma^(n-j), i.e. H_k -> H_k / gamma.
std::vector<TrigPoly> scale_coefficients(const std::vector<TrigPoly>& p, double gamma);

/// H = S1^H S1 - S2^T conj(S2) with S1, S2 upper-triangular Toeplitz built from
/// [p_n, ..., p_1] and [p_0, ..., p_{n-1}]. At each torus point H is positive
/// definite iff every root of z_0 -> sum_j p_j z_0^j lies in the open unit disk.
HermiteMatrix build_hermite(const std::vector<TrigPoly>& p, double gamma = 1.0);

/// Largest root modulus of the scaled univariate polynomial at theta.
double max_root_modulus(const std::vector<TrigPoly>& p, const TorusPoint& theta, double gamma = 1.0);

/// Companion-matrix check that all roots at theta lie in the open unit disk.
bool pointwise_stability_oracle(const std::vector<TrigPoly>& p, const TorusPoint& theta,
                                double gamma = 1.0);

}  // namespace strongcert
