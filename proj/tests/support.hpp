#pragma once

// Shared fixtures and independent oracles for the test binaries.

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strongcert/chardet.hpp"
#include "strongcert/cli.hpp"
#include "strongcert/trigpoly.hpp"

namespace testsupport {

using strongcert::cplx;
using strongcert::DelaySystem;
using strongcert::MultiIndex;
using strongcert::TorusPoint;
using strongcert::TrigPoly;

inline constexpr double kPi = std::numbers::pi;

inline std::string data_path(const std::string& name) { return std::string(STRONGCERT_DATA_DIR) + "/" + name; }

inline DelaySystem s51() { return strongcert::load_system(data_path("s51.json")); }
inline DelaySystem s52() { return strongcert::load_system(data_path("s52.json")); }
inline DelaySystem s53() { return strongcert::load_system(data_path("s53.json")); }

/// The same matrices typed in directly, to check the bundled files.
inline std::vector<Eigen::MatrixXd> s51_literal() {
  Eigen::MatrixXd H1(3, 3), H2(3, 3);
  H1 << 0, 0.2, -0.4, -0.5, 0.3, 0, 0.2, 0.7, 0;
  H2 << -0.3, -0.1, 0, 0, 0.2, 0, 0.1, 0, 0.4;
  return {H1, H2};
}

inline std::vector<Eigen::MatrixXd> s53_literal() {
  const double pi = kPi;
  Eigen::MatrixXd H1(4, 4), H2(4, 4), H3(4, 4), H4(4, 4);
  H1 << 0.1, 0, 0, -0.2, pi / 5, -0.1, 0, -0.3, 0, 0, 0.03, 2, 0, -std::exp(-1.0), 0, 0.23;
  H2 << 0, 0, 0, 0.0456, 0, -0.33, 0.11, 0, 0, 1, 0.2, 0, 0, -std::exp(-3.0), 0.176, 0.73;
  H3 << 0.1, 0.65, 0, 0.42, 0.087, -pi / 8, -0.1, 0, 0, -0.063, 0, 0.72, 0.076, 0.1, 0, -0.23;
  H4 << -0.678, 0, 0, -0.4, -0.0983, 0, 0, 0, 0, 0.0763, 0, 0.2, -std::exp(-5.0), 0, 0.36, 0;
  return {H1, H2, H3, H4};
}

inline Eigen::MatrixXcd random_complex(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = scale * cplx(u(rng), u(rng));
  return a;
}

inline Eigen::MatrixXd random_real(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = scale * u(rng);
  return a;
}

inline DelaySystem random_system(std::mt19937_64& rng, int n, int m, bool complex_entries, double scale = 0.5) {
  std::vector<Eigen::MatrixXcd> hs;
  for (int k = 0; k < m; ++k)
    hs.push_back(complex_entries ? random_complex(rng, n, scale) : Eigen::MatrixXcd(random_real(rng, n, scale).cast<cplx>()));
  return DelaySystem(hs);
}

inline TorusPoint random_point(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  TorusPoint t(m);
  for (double& x : t) x = u(rng);
  return t;
}

/// Random real-valued trigonometric polynomial with per-variable degree <= deg.
inline TrigPoly random_real_trigpoly(std::mt19937_64& rng, int m, int deg) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TrigPoly h(m);
  MultiIndex a(m, -deg);
  while (true) {
    MultiIndex neg(m);
    for (int v = 0; v < m; ++v) neg[v] = -a[v];
    if (a < neg) {
      const cplx c(u(rng), u(rng));
      h.add_term(a, c);
      h.add_term(neg, std::conj(c));
    } else if (a == neg) {
      h.add_term(a, 3.0 * u(rng));
    }
    int v = 0;
    while (v < m && ++a[v] > deg) a[v++] = -deg;
    if (v == m) break;
  }
  return h;
}

/// Minimum of a real-valued trig polynomial on a uniform grid (per_dim^m points).
inline double grid_minimum(const TrigPoly& h, int per_dim) {
  const int m = h.nvars();
  long long total = 1;
  for (int v = 0; v < m; ++v) total *= per_dim;
  double best = std::numeric_limits<double>::infinity();
  TorusPoint t(m);
  for (long long idx = 0; idx < total; ++idx) {
    long long r = idx;
    for (int v = 0; v < m; ++v) {
      t[v] = 2.0 * kPi * static_cast<double>(r % per_dim) / per_dim;
      r /= per_dim;
    }
    best = std::min(best, strongcert::eval(h, t).real());
  }
  return best;
}

// Unpruned sparse polynomial arithmetic for the cofactor oracle.
using Poly = std::map<MultiIndex, cplx>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      MultiIndex e(ea.size());
      for (std::size_t v = 0; v < e.size(); ++v) e[v] = ea[v] + eb[v];
      out[e] += ca * cb;
    }
  return out;
}

inline void poly_axpy(Poly& acc, cplx s, const Poly& a) {
  for (const auto& [e, c] : a) acc[e] += s * c;
}

/// det(I + sum_k H_k z_k) by Laplace expansion along the first row.
inline Poly cofactor_det(const std::vector<std::vector<Poly>>& A) {
  const std::size_t n = A.size();
  if (n == 1) return A[0][0];
  Poly out;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Poly>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Poly> row;
      for (std::size_t cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(A[r][cc]);
      minor.push_back(row);
    }
    poly_axpy(out, (c % 2 == 0) ? 1.0 : -1.0, poly_mul(A[0][c], cofactor_det(minor)));
  }
  return out;
}

inline Poly cofactor_charpoly(const DelaySystem& sys) {
  const int n = sys.n, m = sys.m;
  std::vector<std::vector<Poly>> A(n, std::vector<Poly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) A[i][j][MultiIndex(m, 0)] += 1.0;
      for (int k = 0; k < m; ++k) {
        MultiIndex e(m, 0);
        e[k] = 1;
        A[i][j][e] += sys.H[k](i, j);
      }
    }
  return cofactor_det(A);
}

}  // namespace testsupport
