#include "strongcert/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace strongcert {

namespace {

void require_same_nvars(const TrigPoly& a, const TrigPoly& b, const char* op) {
  if (a.nvars() != b.nvars())
    throw std::invalid_argument(std::string(op) + ": variable count mismatch (" +
                                std::to_string(a.nvars()) + " vs " + std::to_string(b.nvars()) + ")");
}

MultiIndex negate(const MultiIndex& a) {
  MultiIndex r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

}  // namespace

TrigPoly::TrigPoly(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw std::invalid_argument("TrigPoly: nvars must be positive");
}

TrigPoly::TrigPoly(int nvars, Coeffs coeffs) : TrigPoly(nvars) {
  for (const auto& [alpha, c] : coeffs)
    if (static_cast<int>(alpha.size()) != nvars)
      throw std::invalid_argument("TrigPoly: multi-index length differs from nvars");
  coeffs_ = std::move(coeffs);
  prune();
}

TrigPoly TrigPoly::constant(int nvars, cplx c) {
  TrigPoly p(nvars);
  p.add_term(MultiIndex(nvars, 0), c);
  return p;
}

TrigPoly TrigPoly::monomial(MultiIndex alpha, cplx c) {
  TrigPoly p(static_cast<int>(alpha.size()));
  p.add_term(alpha, c);
  return p;
}

cplx TrigPoly::coeff(const MultiIndex& alpha) const {
  auto it = coeffs_.find(alpha);
  return it == coeffs_.end() ? cplx{} : it->second;
}

void TrigPoly::add_term(const MultiIndex& alpha, cplx c) {
  if (static_cast<int>(alpha.size()) != nvars_)
    throw std::invalid_argument("TrigPoly::add_term: multi-index length differs from nvars");
  auto [it, inserted] = coeffs_.try_emplace(alpha, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kPruneThreshold) coeffs_.erase(it);
}

bool TrigPoly::is_real_valued(double tol) const {
  for (const auto& [alpha, c] : coeffs_) {
    if (std::abs(coeff(negate(alpha)) - std::conj(c)) > tol) return false;
  }
  return true;
}

int TrigPoly::max_abs_exponent(int var) const {
  int r = 0;
  for (const auto& [alpha, c] : coeffs_) r = std::max(r, std::abs(alpha[var]));
  return r;
}

int TrigPoly::max_abs_exponent() const {
  int r = 0;
  for (int v = 0; v < nvars_; ++v) r = std::max(r, max_abs_exponent(v));
  return r;
}

int TrigPoly::total_degree() const {
  int r = 0;
  for (const auto& [alpha, c] : coeffs_) {
    int d = 0;
    for (int a : alpha) d += a;
    r = std::max(r, d);
  }
  return r;
}

double TrigPoly::coeff_l1_norm() const {
  double s = 0.0;
  for (const auto& [alpha, c] : coeffs_) s += std::abs(c);
  return s;
}

void TrigPoly::prune() {
  std::erase_if(coeffs_, [](const auto& kv) { return std::abs(kv.second) < kPruneThreshold; });
}

TrigPoly add(const TrigPoly& a, const TrigPoly& b) {
  require_same_nvars(a, b, "add");
  TrigPoly::Coeffs out = a.coeffs();
  for (const auto& [alpha, c] : b.coeffs()) out[alpha] += c;
  return TrigPoly(a.nvars(), std::move(out));
}

TrigPoly sub(const TrigPoly& a, const TrigPoly& b) { return add(a, scale(b, -1.0)); }

TrigPoly mul(const TrigPoly& a, const TrigPoly& b) {
  require_same_nvars(a, b, "mul");
  TrigPoly::Coeffs out;
  MultiIndex gamma(a.nvars());
  for (const auto& [alpha, ca] : a.coeffs()) {
    for (const auto& [beta, cb] : b.coeffs()) {
      for (int i = 0; i < a.nvars(); ++i) gamma[i] = alpha[i] + beta[i];
      out[gamma] += ca * cb;
    }
  }
  return TrigPoly(a.nvars(), std::move(out));
}

TrigPoly scale(const TrigPoly& a, cplx c) {
  TrigPoly::Coeffs out;
  for (const auto& [alpha, v] : a.coeffs()) out.emplace(alpha, v * c);
  return TrigPoly(a.nvars(), std::move(out));
}

TrigPoly conj(const TrigPoly& a) {
  TrigPoly::Coeffs out;
  for (const auto& [alpha, v] : a.coeffs()) out.emplace(negate(alpha), std::conj(v));
  return TrigPoly(a.nvars(), std::move(out));
}

cplx eval(const TrigPoly& a, const TorusPoint& theta) {
  if (static_cast<int>(theta.size()) != a.nvars())
    throw std::invalid_argument("eval: torus point has " + std::to_string(theta.size()) +
                                " angles, polynomial has " + std::to_string(a.nvars()) + " variables");
  cplx s{};
  for (const auto& [alpha, c] : a.coeffs()) {
    double phase = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) phase += theta[i] * alpha[i];
    s += c * std::polar(1.0, phase);
  }
  return s;
}

TrigPolyMatrix::TrigPolyMatrix(int dim, int nvars)
    : dim_(dim), nvars_(nvars), entries_(static_cast<std::size_t>(dim) * dim, TrigPoly(nvars)) {
  if (dim < 1) throw std::invalid_argument("TrigPolyMatrix: dim must be positive");
}

std::size_t TrigPolyMatrix::index(int i, int j) const {
  return static_cast<std::size_t>(i) * dim_ + j;
}

bool TrigPolyMatrix::is_hermitian(double tol) const {
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      const TrigPoly& a = (*this)(i, j);
      const TrigPoly ca = conj((*this)(j, i));
      std::set<MultiIndex> keys;
      for (const auto& kv : a.coeffs()) keys.insert(kv.first);
      for (const auto& kv : ca.coeffs()) keys.insert(kv.first);
      for (const auto& k : keys)
        if (std::abs(a.coeff(k) - ca.coeff(k)) > tol) return false;
    }
  }
  return true;
}

int TrigPolyMatrix::max_abs_exponent(int var) const {
  int r = 0;
  for (const auto& e : entries_) r = std::max(r, e.max_abs_exponent(var));
  return r;
}

int TrigPolyMatrix::max_abs_exponent() const {
  int r = 0;
  for (const auto& e : entries_) r = std::max(r, e.max_abs_exponent());
  return r;
}

Eigen::MatrixXcd TrigPolyMatrix::coeff_matrix(const MultiIndex& alpha) const {
  Eigen::MatrixXcd c(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) c(i, j) = (*this)(i, j).coeff(alpha);
  return c;
}

std::vector<MultiIndex> TrigPolyMatrix::support() const {
  std::set<MultiIndex> keys;
  for (const auto& e : entries_)
    for (const auto& kv : e.coeffs()) keys.insert(kv.first);
  return {keys.begin(), keys.end()};
}

Eigen::MatrixXcd eval_matrix(const TrigPolyMatrix& a, const TorusPoint& theta) {
  if (static_cast<int>(theta.size()) != a.nvars())
    throw std::invalid_argument("eval_matrix: dimension mismatch between torus point and matrix");
  Eigen::MatrixXcd out(a.dim(), a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) out(i, j) = eval(a(i, j), theta);
  return out;
}

}  // namespace strongcert
