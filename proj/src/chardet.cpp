#include "strongcert/chardet.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace strongcert {

DelaySystem::DelaySystem(std::vector<ComplexMatrix> matrices) : H(std::move(matrices)) {
  m = static_cast<int>(H.size());
  n = m > 0 ? static_cast<int>(H.front().rows()) : 0;
  validate();
}

DelaySystem DelaySystem::from_real(const std::vector<Eigen::MatrixXd>& matrices) {
  std::vector<ComplexMatrix> c;
  c.reserve(matrices.size());
  for (const auto& h : matrices) c.push_back(h.cast<std::complex<double>>());
  return DelaySystem(std::move(c));
}

void DelaySystem::validate() const {
  if (m < 1 || static_cast<int>(H.size()) != m)
    throw std::invalid_argument("DelaySystem: need at least one delay matrix (m >= 1)");
  if (n < 1) throw std::invalid_argument("DelaySystem: state dimension n must be positive");
  for (int k = 0; k < m; ++k) {
    if (H[k].rows() != n || H[k].cols() != n)
      throw std::invalid_argument("DelaySystem: H[" + std::to_string(k) + "] is not " +
                                  std::to_string(n) + "x" + std::to_string(n));
    if (!H[k].allFinite())
      throw std::invalid_argument("DelaySystem: H[" + std::to_string(k) + "] has non-finite entries");
  }
}

bool DelaySystem::is_real() const {
  for (const auto& h : H)
    if (h.imag().cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

ComplexMatrix DelaySystem::combination(const TorusPoint& theta, int sign) const {
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < m; ++k) s += std::polar(1.0, sign * theta[k]) * H[k];
  return s;
}

DelaySystem DelaySystem::scaled(double c) const {
  std::vector<ComplexMatrix> out;
  for (const auto& h : H) out.push_back(c * h);
  return DelaySystem(std::move(out));
}

CharPoly sampledet(const DelaySystem& sys) {
  sys.validate();
  const int n = sys.n, m = sys.m, p = n + 1;
  std::size_t total = 1;
  for (int k = 0; k < m; ++k) total *= p;

  // Samples q(w^j) on the (n+1)^m grid, w = exp(2 pi i / (n+1)); index j is
  // little-endian in the per-variable digits.
  std::vector<std::complex<double>> vals(total);
  std::vector<std::complex<double>> roots(p);
  for (int j = 0; j < p; ++j) roots[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / p);
  std::vector<int> digit(m, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    ComplexMatrix a = ComplexMatrix::Identity(n, n);
    for (int k = 0; k < m; ++k) a += roots[digit[k]] * sys.H[k];
    vals[idx] = a.partialPivLu().determinant();
    for (int k = 0; k < m && ++digit[k] == p; ++k) digit[k] = 0;
  }

  // Inverse DFT, one axis at a time: c_a = (1/p) sum_j v_j w^{-a j}.
  std::size_t stride = 1;
  std::vector<std::complex<double>> line(p);
  for (int k = 0; k < m; ++k) {
    for (std::size_t base = 0; base < total; ++base) {
      if ((base / stride) % p != 0) continue;
      for (int j = 0; j < p; ++j) line[j] = vals[base + j * stride];
      for (int a = 0; a < p; ++a) {
        std::complex<double> s{};
        for (int j = 0; j < p; ++j) s += line[j] * std::conj(roots[(a * j) % p]);
        vals[base + a * stride] = s / static_cast<double>(p);
      }
    }
    stride *= p;
  }

  const bool real = sys.is_real();
  TrigPoly q(m);
  std::fill(digit.begin(), digit.end(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    int deg = 0;
    for (int d : digit) deg += d;
    if (deg <= n) {
      std::complex<double> c = vals[idx];
      if (real) c = {c.real(), 0.0};
      q.add_term(MultiIndex(digit.begin(), digit.end()), c);
    }
    for (int k = 0; k < m && ++digit[k] == p; ++k) digit[k] = 0;
  }
  return {std::move(q), n};
}

std::vector<TrigPoly> homogenize(const CharPoly& q) {
  std::vector<TrigPoly> parts(q.n + 1, TrigPoly(q.q.nvars()));
  for (const auto& [alpha, c] : q.q.coeffs()) {
    int deg = 0;
    for (int a : alpha) deg += a;
    if (deg > q.n || deg < 0) throw std::invalid_argument("homogenize: monomial exceeds degree n");
    parts[q.n - deg].add_term(alpha, c);
  }
  return parts;
}

}  // namespace strongcert
