#include "strongcert/evp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "strongcert/numerics.hpp"

namespace strongcert {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double lambda_min_at(const TrigPolyMatrix& H, const TorusPoint& theta) {
  return min_hermitian_eigenvalue(eval_matrix(H, theta));
}

TrigPolyMatrix as_matrix(const TrigPoly& h) {
  TrigPolyMatrix H(1, h.nvars());
  H(0, 0) = h;
  return H;
}

}  // namespace

MatrixXcd localizing_matrix(const TrigPolyMatrix& H, const MonomialBasis& basis) {
  const int n = H.dim();
  const int nb = static_cast<int>(basis.monomials.size());
  std::map<MultiIndex, MatrixXcd> blocks;
  for (const auto& alpha : H.support()) blocks.emplace(alpha, H.coeff_matrix(alpha));

  MatrixXcd L = MatrixXcd::Zero(static_cast<Eigen::Index>(nb) * n, static_cast<Eigen::Index>(nb) * n);
  MultiIndex d(basis.m);
  for (int b = 0; b < nb; ++b)
    for (int c = 0; c < nb; ++c) {
      for (int v = 0; v < basis.m; ++v) d[v] = basis.monomials[b][v] - basis.monomials[c][v];
      const auto it = blocks.find(d);
      if (it != blocks.end()) L.block(b * n, c * n, n, n) = it->second;
    }
  return L;
}

UpperBound upper_bound(const TrigPolyMatrix& H, int k) {
  if (k < 1) throw std::invalid_argument("upper_bound: order k must be at least 1");
  if (!H.is_hermitian(1e-9)) throw std::invalid_argument("upper_bound: input is not Hermitian");
  UpperBound ub;
  ub.k = k;
  ub.basis = make_basis(H.nvars(), k);
  const MatrixXcd L = localizing_matrix(H, ub.basis);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(L);
  if (es.info() != Eigen::Success) throw std::runtime_error("upper_bound: eigensolver failed");
  ub.value = es.eigenvalues()(0);
  ub.probe = es.eigenvectors().col(0);
  return ub;
}

UpperBound upper_bound(const TrigPoly& h, int k) {
  if (!h.is_real_valued(1e-9)) throw std::invalid_argument("upper_bound: polynomial is not real-valued");
  return upper_bound(as_matrix(h), k);
}

VectorXcd probe_value(const UpperBound& ub, int n, const TorusPoint& theta) {
  VectorXcd v = VectorXcd::Zero(n);
  for (std::size_t b = 0; b < ub.basis.monomials.size(); ++b) {
    double phase = 0.0;
    for (int i = 0; i < ub.basis.m; ++i) phase += ub.basis.monomials[b][i] * theta[i];
    v += std::polar(1.0, phase) * ub.probe.segment(static_cast<Eigen::Index>(b) * n, n);
  }
  return v;
}

std::optional<TorusPoint> find_negative_point(const TrigPolyMatrix& H, const UpperBound& ub, double tol, int seeds) {
  const int m = H.nvars(), n = H.dim();
  // Candidate grid with at most ~4096 points.
  int per_dim = 4;
  while (std::pow(per_dim + 1, m) <= 4096.0 && per_dim < 64) ++per_dim;
  long long total = 1;
  for (int i = 0; i < m; ++i) total *= per_dim;

  struct Candidate {
    double weight;
    double lambda;
    TorusPoint theta;
  };
  std::vector<Candidate> cands;
  cands.reserve(total);
  const double step0 = kTwoPi / per_dim;
  TorusPoint theta(m);
  for (long long idx = 0; idx < total; ++idx) {
    long long r = idx;
    for (int i = 0; i < m; ++i) {
      theta[i] = step0 * static_cast<double>(r % per_dim);
      r /= per_dim;
    }
    cands.push_back({probe_value(ub, n, theta).squaredNorm(), lambda_min_at(H, theta), theta});
  }

  // Seeds: the most negative grid points, then the heaviest probe points.
  std::vector<std::size_t> order(cands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::size_t> chosen;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return cands[a].lambda < cands[b].lambda; });
  for (int s = 0; s < (seeds + 1) / 2 && s < static_cast<int>(order.size()); ++s) chosen.push_back(order[s]);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return cands[a].weight > cands[b].weight; });
  for (std::size_t s = 0; s < order.size() && static_cast<int>(chosen.size()) < seeds; ++s)
    if (std::find(chosen.begin(), chosen.end(), order[s]) == chosen.end()) chosen.push_back(order[s]);

  std::optional<TorusPoint> best;
  double best_val = -tol;
  for (std::size_t c : chosen) {
    TorusPoint x = cands[c].theta;
    double fx = cands[c].lambda;
    // Compass search.
    for (double h = step0 / 2; h > 1e-9; h /= 2) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (int i = 0; i < m; ++i)
          for (double sgn : {1.0, -1.0}) {
            TorusPoint y = x;
            y[i] += sgn * h;
            const double fy = lambda_min_at(H, y);
            if (fy < fx) {
              x = y;
              fx = fy;
              improved = true;
            }
          }
      }
    }
    if (fx < best_val) {
      best_val = fx;
      for (double& a : x) {
        a = std::fmod(a, kTwoPi);
        if (a < 0.0) a += kTwoPi;
      }
      best = x;
    }
  }
  return best;
}

DisproofResult disprove_positivity(const TrigPolyMatrix& H, int k_max, const EvpConfig& cfg) {
  if (k_max < 1) throw std::invalid_argument("disprove_positivity: k_max must be at least 1");
  DisproofResult out;
  for (int k = 1; k <= k_max; ++k) {
    const double size = std::pow(k + 1.0, H.nvars()) * H.dim();
    if (size > cfg.max_matrix_size) break;
    const UpperBound ub = upper_bound(H, k);
    out.bounds.push_back(ub.value);
    out.max_order_reached = k;
    if (ub.value < -cfg.negativity_tol) {
      Refutation r;
      r.k = k;
      r.bound = ub.value;
      r.probe = ub.probe;
      r.witness = find_negative_point(H, ub, cfg.negativity_tol, cfg.witness_seeds);
      if (r.witness) r.witness_eigenvalue = lambda_min_at(H, *r.witness);
      out.refutation = std::move(r);
      break;
    }
  }
  return out;
}

}  // namespace strongcert
