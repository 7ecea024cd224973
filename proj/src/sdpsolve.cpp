#include "strongcert/sdpsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace strongcert {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Optimal: return "Optimal";
    case SolverStatus::PrimalInfeasible: return "PrimalInfeasible";
    case SolverStatus::DualInfeasible: return "DualInfeasible";
    case SolverStatus::IterationLimit: return "IterationLimit";
    case SolverStatus::Refused: return "Refused";
  }
  return "Unknown";
}

void ConicProblem::validate() const {
  if (psd_size < 0 || lp_size < 0) throw std::invalid_argument("ConicProblem: negative block size");
  if (A.size() != b.size()) throw std::invalid_argument("ConicProblem: A and b sizes differ");
  auto check = [&](const SparseSym& s) {
    for (const auto& e : s.psd)
      if (e.row < 0 || e.col < e.row || e.col >= psd_size)
        throw std::invalid_argument("ConicProblem: PSD entry out of range or below diagonal");
    for (const auto& [i, v] : s.diag)
      if (i < 0 || i >= lp_size) throw std::invalid_argument("ConicProblem: diagonal entry out of range");
  };
  for (const auto& a : A) check(a);
  check(C);
}

double inner(const SparseSym& a, const MatrixXd& x) {
  double s = 0.0;
  for (const auto& e : a.psd)
    s += e.row == e.col ? e.value * x(e.row, e.row) : e.value * (x(e.row, e.col) + x(e.col, e.row));
  return s;
}

static double inner_lp(const SparseSym& a, const VectorXd& x) {
  double s = 0.0;
  for (const auto& [i, v] : a.diag) s += v * x(i);
  return s;
}

VectorXd apply_A(const ConicProblem& p, const MatrixXd& X, const VectorXd& x_lp) {
  VectorXd out(p.num_constraints());
  for (int i = 0; i < p.num_constraints(); ++i)
    out(i) = inner(p.A[i], X) + (p.lp_size > 0 ? inner_lp(p.A[i], x_lp) : 0.0);
  return out;
}

static void add_scaled(const SparseSym& a, double w, MatrixXd& psd, VectorXd& lp) {
  for (const auto& e : a.psd) {
    psd(e.row, e.col) += w * e.value;
    if (e.row != e.col) psd(e.col, e.row) += w * e.value;
  }
  for (const auto& [i, v] : a.diag) lp(i) += w * v;
}

void apply_At(const ConicProblem& p, const VectorXd& y, MatrixXd& psd, VectorXd& lp) {
  psd = MatrixXd::Zero(p.psd_size, p.psd_size);
  lp = VectorXd::Zero(p.lp_size);
  for (int i = 0; i < p.num_constraints(); ++i)
    if (y(i) != 0.0) add_scaled(p.A[i], y(i), psd, lp);
}

MatrixXd dense_psd(const SparseSym& a, int size) {
  MatrixXd m = MatrixXd::Zero(size, size);
  for (const auto& e : a.psd) {
    m(e.row, e.col) += e.value;
    if (e.row != e.col) m(e.col, e.row) += e.value;
  }
  return m;
}

namespace {

VectorXd dense_lp(const SparseSym& a, int size) {
  VectorXd v = VectorXd::Zero(size);
  for (const auto& [i, x] : a.diag) v(i) += x;
  return v;
}

// Gram matrix <A_i, A_j> (PSD part counts both triangles).
MatrixXd constraint_gram(const ConicProblem& p) {
  const int m = p.num_constraints();
  std::map<long long, std::vector<std::pair<int, double>>> by_pos;
  for (int i = 0; i < m; ++i) {
    for (const auto& e : p.A[i].psd) {
      const double w = e.row == e.col ? e.value : std::sqrt(2.0) * e.value;
      by_pos[static_cast<long long>(e.row) * p.psd_size + e.col].emplace_back(i, w);
    }
    for (const auto& [k, v] : p.A[i].diag)
      by_pos[-1 - static_cast<long long>(k)].emplace_back(i, v);
  }
  MatrixXd g = MatrixXd::Zero(m, m);
  for (const auto& [pos, list] : by_pos)
    for (const auto& [i, vi] : list)
      for (const auto& [j, vj] : list) g(i, j) += vi * vj;
  return g;
}

struct RowSelection {
  std::vector<int> keep;
  std::vector<int> removed;
  VectorXd inconsistency_ray;  // nonempty when dependent rows contradict b
};

// Incremental Cholesky of the Gram matrix in row order; a row whose residual
// norm vanishes relative to its own norm depends on the rows kept before it.
RowSelection select_independent_rows(const ConicProblem& p, double tol) {
  const int m = p.num_constraints();
  RowSelection sel;
  if (m == 0) return sel;
  const MatrixXd g = constraint_gram(p);
  const double scale = std::max(1.0, g.diagonal().maxCoeff());
  MatrixXd L = MatrixXd::Zero(m, m);  // leading k x k block is the factor of kept rows
  for (int i = 0; i < m; ++i) {
    if (g(i, i) <= 1e-24 * scale) {
      sel.removed.push_back(i);
      continue;
    }
    const int k = static_cast<int>(sel.keep.size());
    VectorXd gi(k);
    for (int a = 0; a < k; ++a) gi(a) = g(sel.keep[a], i);
    VectorXd w = VectorXd::Zero(k);
    double resid = g(i, i);
    if (k > 0 && gi.cwiseAbs().maxCoeff() > 0.0) {
      w = L.topLeftCorner(k, k).triangularView<Eigen::Lower>().solve(gi);
      resid -= w.squaredNorm();
    }
    if (resid > 1e-12 * g(i, i)) {
      L.row(k).head(k) = w.transpose();
      L(k, k) = std::sqrt(resid);
      sel.keep.push_back(i);
      continue;
    }
    sel.removed.push_back(i);
    // A_i = sum_a coef_a A_keep[a]; the right-hand side must follow.
    const VectorXd coef = L.topLeftCorner(k, k).transpose().triangularView<Eigen::Upper>().solve(w);
    double bres = p.b[i];
    for (int a = 0; a < k; ++a) bres -= coef(a) * p.b[sel.keep[a]];
    if (std::abs(bres) > tol * (1.0 + std::abs(p.b[i])) && sel.inconsistency_ray.size() == 0) {
      VectorXd ray = VectorXd::Zero(m);
      ray(i) = 1.0;
      for (int a = 0; a < k; ++a) ray(sel.keep[a]) = -coef(a);
      sel.inconsistency_ray = ray / bres;
    }
  }
  return sel;
}

// Largest alpha in (0, inf] with X + alpha dX psd, given L = chol(X).
double max_step_psd(const Eigen::LLT<MatrixXd>& chol, const MatrixXd& dX) {
  if (dX.rows() == 0) return std::numeric_limits<double>::infinity();
  MatrixXd t = chol.matrixL().solve(dX);
  t = MatrixXd(chol.matrixL().solve(MatrixXd(t.transpose()))).transpose().eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (t + t.transpose()), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step_lp(const VectorXd& x, const VectorXd& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  return a;
}

class InteriorPoint {
 public:
  InteriorPoint(const ConicProblem& p, const SolverConfig& cfg) : p_(p), cfg_(cfg) {
    m_ = p.num_constraints();
    ns_ = p.psd_size;
    nl_ = p.lp_size;
    b_ = Eigen::Map<const VectorXd>(p.b.data(), m_);
    C_ = dense_psd(p.C, ns_);
    c_ = dense_lp(p.C, nl_);
    // Index sets touched by each constraint, and the constraint restricted to them.
    touched_.resize(m_);
    local_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      std::vector<int>& t = touched_[i];
      for (const auto& e : p.A[i].psd) {
        t.push_back(e.row);
        t.push_back(e.col);
      }
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
      MatrixXd a = MatrixXd::Zero(t.size(), t.size());
      for (const auto& e : p.A[i].psd) {
        const auto r = std::lower_bound(t.begin(), t.end(), e.row) - t.begin();
        const auto c = std::lower_bound(t.begin(), t.end(), e.col) - t.begin();
        a(r, c) += e.value;
        if (r != c) a(c, r) += e.value;
      }
      local_[i] = std::move(a);
    }
    Al_ = MatrixXd::Zero(m_, nl_);
    for (int i = 0; i < m_; ++i)
      for (const auto& [k, v] : p.A[i].diag) Al_(i, k) += v;
  }

  SolverResult run() {
    SolverResult res;
    const double xi = 1.0 + b_.norm() + std::sqrt(C_.squaredNorm() + c_.squaredNorm());
    MatrixXd X = xi * MatrixXd::Identity(ns_, ns_), Z = X;
    VectorXd x = VectorXd::Constant(nl_, xi), z = x;
    VectorXd y = VectorXd::Zero(m_);
    const double nb = 1.0 + b_.norm();
    const double nc = 1.0 + std::sqrt(C_.squaredNorm() + c_.squaredNorm());
    const double ncone = std::max(1, ns_ + nl_);

    for (int it = 0; it <= cfg_.max_iterations; ++it) {
      res.iterations = it;
      const VectorXd rp = b_ - apply_A(p_, X, x);
      MatrixXd AtY;
      VectorXd aty;
      apply_At(p_, y, AtY, aty);
      const MatrixXd Rd = C_ - Z - AtY;
      const VectorXd rd = c_ - z - aty;
      const double xz = (X.cwiseProduct(Z)).sum() + x.dot(z);
      const double mu = xz / ncone;
      const double pobj = (C_.cwiseProduct(X)).sum() + c_.dot(x);
      const double dobj = b_.dot(y);
      const double pinf = rp.norm() / nb;
      const double dinf = std::sqrt(Rd.squaredNorm() + rd.squaredNorm()) / nc;
      const double relgap = xz / (1.0 + std::abs(pobj) + std::abs(dobj));

      res.X = X; res.x_lp = x; res.y = y; res.Z = Z; res.z_lp = z;
      res.primal_objective = pobj; res.dual_objective = dobj; res.gap = xz;
      res.primal_residual = pinf; res.dual_residual = dinf;

      if (pinf <= cfg_.feasibility_tol && dinf <= cfg_.feasibility_tol && relgap <= cfg_.gap_tol) {
        res.status = SolverStatus::Optimal;
        res.message = "converged";
        return res;
      }
      // Divergence-based infeasibility detection.
      const double dscale = std::sqrt((C_ - Rd).squaredNorm() + (c_ - rd).squaredNorm()) + 1.0;
      if (dobj > cfg_.infeasibility_threshold * dscale) {
        res.status = SolverStatus::PrimalInfeasible;
        res.ray = y / dobj;
        res.message = "dual objective diverged";
        return res;
      }
      const double pscale = b_.norm() + rp.norm() + 1.0;
      if (-pobj > cfg_.infeasibility_threshold * pscale) {
        res.status = SolverStatus::DualInfeasible;
        res.ray = Eigen::Map<const VectorXd>(X.data(), X.size()) / -pobj;
        res.message = "primal objective diverged";
        return res;
      }
      if (it == cfg_.max_iterations) break;

      // Near convergence rounding can push the smallest eigenvalues of X or Z
      // to zero; nudge the iterate back with a roundoff-sized shift.
      Eigen::LLT<MatrixXd> cholZ(Z), cholX(X);
      for (int tries = 0; tries < 3 && cholX.info() != Eigen::Success; ++tries) {
        X.diagonal().array() += 1e-14 * std::pow(100.0, tries) * (1.0 + X.diagonal().cwiseAbs().maxCoeff());
        cholX.compute(X);
      }
      for (int tries = 0; tries < 3 && cholZ.info() != Eigen::Success; ++tries) {
        Z.diagonal().array() += 1e-14 * std::pow(100.0, tries) * (1.0 + Z.diagonal().cwiseAbs().maxCoeff());
        cholZ.compute(Z);
      }
      if (cholZ.info() != Eigen::Success || cholX.info() != Eigen::Success) {
        res.message = "iterate left the cone";
        break;
      }
      const MatrixXd Zinv = cholZ.solve(MatrixXd::Identity(ns_, ns_));

      MatrixXd M = schur(X, Zinv);
      if (nl_ > 0) M += Al_ * (x.cwiseQuotient(z)).asDiagonal() * Al_.transpose();
      Eigen::LLT<MatrixXd> cholM(M);
      if (cholM.info() != Eigen::Success) {
        const double reg = 1e-14 * std::max(1.0, M.diagonal().maxCoeff());
        M.diagonal().array() += reg;
        cholM.compute(M);
        if (cholM.info() != Eigen::Success) {
          res.message = "Schur complement not positive definite";
          break;
        }
      }

      // Predictor (sigma = 0).
      const MatrixXd XRdZinv = X * Rd * Zinv;
      MatrixXd dX, dZ;
      VectorXd dx, dz, dy;
      direction(cholM, X, Zinv, XRdZinv, rp, Rd, rd, x, z, -X, -x.cwiseProduct(z), dX, dZ, dx, dz, dy);
      double ap = std::min(1.0, max_step_psd(cholX, dX)), ad = std::min(1.0, max_step_psd(cholZ, dZ));
      if (nl_ > 0) {
        ap = std::min(ap, max_step_lp(x, dx));
        ad = std::min(ad, max_step_lp(z, dz));
      }
      const double mu_aff = (((X + ap * dX).cwiseProduct(Z + ad * dZ)).sum() +
                             (x + ap * dx).dot(z + ad * dz)) / ncone;
      double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

      // Corrector.
      const MatrixXd RcZinv = sigma * mu * Zinv - X - dX * dZ * Zinv;
      const VectorXd rc = VectorXd::Constant(nl_, sigma * mu) - x.cwiseProduct(z) - dx.cwiseProduct(dz);
      direction(cholM, X, Zinv, XRdZinv, rp, Rd, rd, x, z, RcZinv, rc, dX, dZ, dx, dz, dy);
      ap = max_step_psd(cholX, dX);
      ad = max_step_psd(cholZ, dZ);
      if (nl_ > 0) {
        ap = std::min(ap, max_step_lp(x, dx));
        ad = std::min(ad, max_step_lp(z, dz));
      }
      ap = std::min(1.0, cfg_.step_fraction * ap);
      ad = std::min(1.0, cfg_.step_fraction * ad);

      X += ap * dX;
      x += ap * dx;
      y += ad * dy;
      Z += ad * dZ;
      z += ad * dz;
      X = (0.5 * (X + X.transpose())).eval();
      Z = (0.5 * (Z + Z.transpose())).eval();
    }
    res.status = SolverStatus::IterationLimit;
    if (res.message.empty()) res.message = "iteration limit reached";
    return res;
  }

 private:
  // M_ij = <A_i, X A_j Zinv>.
  MatrixXd schur(const MatrixXd& X, const MatrixXd& Zinv) const {
    MatrixXd M(m_, m_);
    MatrixXd G;
    for (int j = 0; j < m_; ++j) {
      const auto& t = touched_[j];
      const int k = static_cast<int>(t.size());
      if (k == 0) {
        M.col(j).setZero();
        continue;
      }
      MatrixXd Xt(ns_, k), Zt(k, ns_);
      for (int a = 0; a < k; ++a) {
        Xt.col(a) = X.col(t[a]);
        Zt.row(a) = Zinv.row(t[a]);
      }
      G.noalias() = (Xt * local_[j]) * Zt;
      for (int i = 0; i < m_; ++i) M(i, j) = inner(p_.A[i], G);
    }
    return 0.5 * (M + M.transpose());
  }

  // Solves for the HKM direction given RcZinv = Rc Zinv (PSD block) and rc (LP block).
  void direction(const Eigen::LLT<MatrixXd>& cholM, const MatrixXd& X, const MatrixXd& Zinv,
                 const MatrixXd& XRdZinv, const VectorXd& rp, const MatrixXd& Rd, const VectorXd& rd,
                 const VectorXd& x, const VectorXd& z, const MatrixXd& RcZinv, const VectorXd& rc,
                 MatrixXd& dX, MatrixXd& dZ, VectorXd& dx, VectorXd& dz, VectorXd& dy) const {
    const MatrixXd G = RcZinv - XRdZinv;
    VectorXd rhs(m_);
    for (int i = 0; i < m_; ++i) rhs(i) = rp(i) - inner(p_.A[i], G);
    if (nl_ > 0) rhs -= Al_ * (rc - x.cwiseProduct(rd)).cwiseQuotient(z);
    dy = cholM.solve(rhs);
    MatrixXd AtDy;
    VectorXd atdy;
    apply_At(p_, dy, AtDy, atdy);
    dZ = Rd - AtDy;
    dX = RcZinv - X * dZ * Zinv;
    dX = (0.5 * (dX + dX.transpose())).eval();
    dz = rd - atdy;
    dx = nl_ > 0 ? VectorXd((rc - x.cwiseProduct(dz)).cwiseQuotient(z)) : VectorXd::Zero(0);
  }

  const ConicProblem& p_;
  const SolverConfig& cfg_;
  int m_ = 0, ns_ = 0, nl_ = 0;
  VectorXd b_, c_;
  MatrixXd C_, Al_;
  std::vector<std::vector<int>> touched_;
  std::vector<MatrixXd> local_;
};

ConicProblem restrict_rows(const ConicProblem& p, const std::vector<int>& keep) {
  ConicProblem r;
  r.psd_size = p.psd_size;
  r.lp_size = p.lp_size;
  r.C = p.C;
  for (int i : keep) {
    r.A.push_back(p.A[i]);
    r.b.push_back(p.b[i]);
  }
  return r;
}

}  // namespace

SolverResult solve(const ConicProblem& p, const SolverConfig& cfg) {
  p.validate();
  SolverResult res;
  if (p.psd_size > cfg.max_psd_size) {
    res.status = SolverStatus::Refused;
    res.message = "PSD block of size " + std::to_string(p.psd_size) + " exceeds the dense solver limit " +
                  std::to_string(cfg.max_psd_size) + "; use export";
    return res;
  }
  const RowSelection sel = select_independent_rows(p, cfg.feasibility_tol);
  if (sel.inconsistency_ray.size() > 0) {
    res.status = SolverStatus::PrimalInfeasible;
    res.ray = sel.inconsistency_ray;
    res.removed_rows = sel.removed;
    res.message = "linearly dependent constraints with inconsistent right-hand side";
    return res;
  }
  const bool reduced = !sel.removed.empty();
  const ConicProblem q = reduced ? restrict_rows(p, sel.keep) : ConicProblem{};
  const ConicProblem& work = reduced ? q : p;

  InteriorPoint ipm(work, cfg);
  res = ipm.run();
  res.removed_rows = sel.removed;
  if (reduced) {
    auto expand = [&](const VectorXd& v) {
      if (v.size() == 0) return v;
      VectorXd full = VectorXd::Zero(p.num_constraints());
      for (std::size_t a = 0; a < sel.keep.size(); ++a) full(sel.keep[a]) = v(a);
      return full;
    };
    res.y = expand(res.y);
    if (res.status == SolverStatus::PrimalInfeasible) res.ray = expand(res.ray);
  }
  if (res.status == SolverStatus::Optimal) {
    std::string why;
    if (!check_optimal(p, res, cfg, &why)) {
      res.status = SolverStatus::IterationLimit;
      res.message = "post-hoc check failed: " + why;
    }
  }
  return res;
}

bool check_optimal(const ConicProblem& p, const SolverResult& r, const SolverConfig& cfg, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const int ns = p.psd_size, nl = p.lp_size;
  if (r.X.rows() != ns || r.y.size() != p.num_constraints()) return fail("dimension mismatch");
  const VectorXd b = Eigen::Map<const VectorXd>(p.b.data(), p.num_constraints());
  const VectorXd xl = nl > 0 ? r.x_lp : VectorXd::Zero(0);
  const double pres = (b - apply_A(p, r.X, xl)).norm() / (1.0 + b.norm());
  if (!(pres <= cfg.feasibility_tol)) return fail("primal residual " + std::to_string(pres));

  MatrixXd Aty;
  VectorXd aty;
  apply_At(p, r.y, Aty, aty);
  const MatrixXd C = dense_psd(p.C, ns);
  const VectorXd c = dense_lp(p.C, nl);
  const MatrixXd Z = C - Aty;
  const double cnorm = 1.0 + std::sqrt(C.squaredNorm() + c.squaredNorm());
  const double shift = cfg.feasibility_tol * cnorm;
  const double xshift = cfg.feasibility_tol * (1.0 + r.X.norm());

  auto psd_ok = [](const MatrixXd& a, double s) {
    Eigen::LLT<MatrixXd> llt(a + s * MatrixXd::Identity(a.rows(), a.cols()));
    return llt.info() == Eigen::Success;
  };
  if (ns > 0 && !psd_ok(r.X, xshift)) return fail("X is not positive semidefinite");
  if (ns > 0 && !psd_ok(Z, shift)) return fail("C - A^T y is not positive semidefinite");
  for (int i = 0; i < nl; ++i) {
    if (xl(i) < -xshift) return fail("negative LP primal entry");
    if (c(i) - aty(i) < -shift) return fail("negative LP dual slack");
  }
  const double pobj = (C.cwiseProduct(r.X)).sum() + c.dot(xl);
  const double dobj = b.dot(r.y);
  if (std::abs(pobj - dobj) > 10.0 * cfg.gap_tol * (1.0 + std::abs(pobj) + std::abs(dobj)))
    return fail("duality gap " + std::to_string(pobj - dobj));
  return true;
}

}  // namespace strongcert
