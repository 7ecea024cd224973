#pragma once

// Multivariate trigonometric (Laurent) polynomials on the m-torus and
// Hermitian matrices of them.

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace strongcert {

using cplx = std::complex<double>;

/// Integer exponent vector; entries may be negative.
using MultiIndex = std::vector<int>;

/// Angles (theta_1, ..., theta_m); z_k = exp(i theta_k).
using TorusPoint = std::vector<double>;

/// Coefficients with modulus below this are dropped by every operation.
inline constexpr double kPruneThreshold = 1e-8;

class TrigPoly {
 public:
  using Coeffs = std::map<MultiIndex, cplx>;

  explicit TrigPoly(int nvars);
  TrigPoly(int nvars, Coeffs coeffs);

  static TrigPoly constant(int nvars, cplx c);
  static TrigPoly monomial(MultiIndex alpha, cplx c = 1.0);

  int nvars() const { return nvars_; }
  const Coeffs& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }

  /// Zero if the index is not stored.
  cplx coeff(const MultiIndex& alpha) const;

  /// Adds c to the coefficient of z^alpha, then prunes that entry.
  void add_term(const MultiIndex& alpha, cplx c);

  /// coeff(-alpha) == conj(coeff(alpha)) within tol for every stored alpha.
  bool is_real_valued(double tol = 0.0) const;

  /// Largest |alpha_var| over stored monomials (0 for the zero polynomial).
  int max_abs_exponent(int var) const;
  int max_abs_exponent() const;
  int total_degree() const;

  double coeff_l1_norm() const;

  friend bool operator==(const TrigPoly& a, const TrigPoly& b) = default;

 private:
  void prune();

  int nvars_;
  Coeffs coeffs_;
};

TrigPoly add(const TrigPoly& a, const TrigPoly& b);
TrigPoly sub(const TrigPoly& a, const TrigPoly& b);
TrigPoly mul(const TrigPoly& a, const TrigPoly& b);
TrigPoly scale(const TrigPoly& a, cplx c);
/// coeff'(alpha) = conj(coeff(-alpha)); pointwise complex conjugate on the torus.
TrigPoly conj(const TrigPoly& a);
cplx eval(const TrigPoly& a, const TorusPoint& theta);

inline TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) { return add(a, b); }
inline TrigPoly operator-(const TrigPoly& a, const TrigPoly& b) { return sub(a, b); }
inline TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) { return mul(a, b); }

/// Square matrix of TrigPolys, stored row-major. Hermitian on the torus when
/// entry(j,i) == conj(entry(i,j)).
class TrigPolyMatrix {
 public:
  TrigPolyMatrix(int dim, int nvars);

  int dim() const { return dim_; }
  int nvars() const { return nvars_; }

  const TrigPoly& operator()(int i, int j) const { return entries_[index(i, j)]; }
  TrigPoly& operator()(int i, int j) { return entries_[index(i, j)]; }

  bool is_hermitian(double tol = 0.0) const;
  int max_abs_exponent(int var) const;
  int max_abs_exponent() const;

  /// Coefficient matrix of z^alpha: [entry(i,j).coeff(alpha)].
  Eigen::MatrixXcd coeff_matrix(const MultiIndex& alpha) const;

  /// Union of the supports of all entries, sorted.
  std::vector<MultiIndex> support() const;

 private:
  std::size_t index(int i, int j) const;

  int dim_;
  int nvars_;
  std::vector<TrigPoly> entries_;
};

Eigen::MatrixXcd eval_matrix(const TrigPolyMatrix& a, const TorusPoint& theta);

}  // namespace strongcert
