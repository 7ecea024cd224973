#include "strongcert/sosgram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace strongcert {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

MonomialBasis make_basis(int m, int k) {
  if (m < 1 || k < 0) throw std::invalid_argument("make_basis: need m >= 1 and k >= 0");
  MonomialBasis basis{m, k, {}};
  MultiIndex a(m, 0);
  while (true) {
    basis.monomials.push_back(a);
    int v = 0;
    while (v < m && ++a[v] > k) a[v++] = 0;
    if (v == m) break;
  }
  std::sort(basis.monomials.begin(), basis.monomials.end(), [](const MultiIndex& x, const MultiIndex& y) {
    int dx = 0, dy = 0;
    for (int e : x) dx += e;
    for (int e : y) dy += e;
    if (dx != dy) return dx < dy;
    return x > y;
  });
  return basis;
}

SdpDims relaxation_dims(const TrigPolyMatrix& H, int k, RelaxationMode mode) {
  if (k < 1) throw std::invalid_argument("relaxation_dims: order k must be at least 1");
  const long long n = H.dim();
  long long basis = 1, diffs = 1;
  for (int v = 0; v < H.nvars(); ++v) {
    basis *= k + 1;
    diffs *= 2 * k + 1;
  }
  SdpDims d;
  d.S = static_cast<int>(basis * n);
  d.N = 4LL * d.S * d.S;
  const long long rows = n + n * (n - 1) + (diffs - 1) / 2 * 2 * n * n;
  d.M = static_cast<int>(mode == RelaxationMode::Feasibility ? rows : rows - 1);
  return d;
}

int minimal_order(const TrigPolyMatrix& H) { return std::max(1, H.max_abs_exponent()); }

namespace {

bool is_canonical(const MultiIndex& a) {
  for (int v : a) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return true;  // zero
}

bool is_zero_index(const MultiIndex& a) {
  return std::all_of(a.begin(), a.end(), [](int v) { return v == 0; });
}

// Pairs (b, c) of basis positions with beta_c - beta_b = alpha.
std::map<MultiIndex, std::vector<std::pair<int, int>>> difference_pairs(const MonomialBasis& basis) {
  std::map<MultiIndex, std::vector<std::pair<int, int>>> out;
  const int nb = static_cast<int>(basis.monomials.size());
  MultiIndex d(basis.m);
  for (int b = 0; b < nb; ++b)
    for (int c = 0; c < nb; ++c) {
      for (int v = 0; v < basis.m; ++v) d[v] = basis.monomials[c][v] - basis.monomials[b][v];
      out[d].emplace_back(b, c);
    }
  return out;
}

// Accumulates a symmetric-matrix functional Y -> sum w * Y(r,c) into entries.
class EntryBuilder {
 public:
  void add(int r, int c, double w) {
    if (r > c) std::swap(r, c);
    acc_[{r, c}] += r == c ? w : 0.5 * w;
  }
  SparseSym finish() const {
    SparseSym s;
    for (const auto& [rc, v] : acc_)
      if (v != 0.0) s.psd.push_back({rc.first, rc.second, v});
    return s;
  }

 private:
  std::map<std::pair<int, int>, double> acc_;
};

// Real and imaginary parts of sum over pairs of X_{(b,i),(c,j)} in terms of Y.
SparseSym coefficient_functional(const std::vector<std::pair<int, int>>& pairs, int n, int S, int i, int j,
                                 bool imaginary) {
  EntryBuilder eb;
  for (const auto& [b, c] : pairs) {
    const int p = b * n + i, q = c * n + j;
    if (!imaginary) {
      eb.add(p, q, 1.0);
      eb.add(S + p, S + q, 1.0);
    } else {
      eb.add(S + p, q, 1.0);
      eb.add(p, S + q, -1.0);
    }
  }
  return eb.finish();
}

SparseSym subtract(const SparseSym& a, const SparseSym& b) {
  std::map<std::pair<int, int>, double> acc;
  for (const auto& e : a.psd) acc[{e.row, e.col}] += e.value;
  for (const auto& e : b.psd) acc[{e.row, e.col}] -= e.value;
  SparseSym s;
  for (const auto& [rc, v] : acc)
    if (v != 0.0) s.psd.push_back({rc.first, rc.second, v});
  return s;
}

double part(cplx c, bool imaginary) { return imaginary ? c.imag() : c.real(); }

}  // namespace

SdpProblem build_relaxation(const TrigPolyMatrix& H, int k, RelaxationMode mode) {
  if (k < 1) throw std::invalid_argument("build_relaxation: order k must be at least 1");
  if (!H.is_hermitian(1e-9)) throw std::invalid_argument("build_relaxation: target matrix is not Hermitian");
  for (int v = 0; v < H.nvars(); ++v)
    if (H.max_abs_exponent(v) > k)
      throw std::invalid_argument("build_relaxation: basis cannot represent target (variable " +
                                  std::to_string(v + 1) + " has degree " + std::to_string(H.max_abs_exponent(v)) +
                                  " > k = " + std::to_string(k) + ")");

  const int n = H.dim(), m = H.nvars();
  SdpProblem p;
  p.mode = mode;
  p.target = H;
  p.n = n;
  p.basis = make_basis(m, k);
  const int S = static_cast<int>(p.basis.monomials.size()) * n;
  p.dims.S = S;
  p.dims.N = 4LL * S * S;
  p.conic.psd_size = 2 * S;
  for (int r = 0; r < 2 * S; ++r) p.conic.C.psd.push_back({r, r, 1.0});

  const auto pairs = difference_pairs(p.basis);
  const MultiIndex zero(m, 0);
  const MatrixXcd H0 = H.coeff_matrix(zero);
  p.trace_constant = H0.trace().real();

  // Feasibility layout: diagonal of alpha = 0, off-diagonal of alpha = 0, then
  // every canonical alpha != 0 with all (i, j).
  std::vector<ConstraintKey> keys;
  std::vector<SparseSym> rows;
  std::vector<double> rhs;
  auto push = [&](const MultiIndex& alpha, int i, int j, bool im) {
    keys.push_back({alpha, i, j, im});
    rows.push_back(coefficient_functional(pairs.at(alpha), n, S, i, j, im));
    rhs.push_back(part(H(i, j).coeff(alpha), im));
  };
  for (int i = 0; i < n; ++i) push(zero, i, i, false);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      push(zero, i, j, false);
      push(zero, i, j, true);
    }
  for (const auto& [alpha, list] : pairs) {
    if (is_zero_index(alpha) || !is_canonical(alpha)) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        push(alpha, i, j, false);
        push(alpha, i, j, true);
      }
  }

  if (mode == RelaxationMode::Feasibility) {
    p.keys = std::move(keys);
    p.conic.A = std::move(rows);
    p.conic.b = std::move(rhs);
  } else {
    // h = (tr H_0 - tr X) / n is eliminated: the n diagonal rows become n-1 differences.
    for (int i = 1; i < n; ++i) {
      p.keys.push_back(keys[i]);
      p.conic.A.push_back(subtract(rows[i], rows[0]));
      p.conic.b.push_back(rhs[i] - rhs[0]);
    }
    for (std::size_t r = n; r < rows.size(); ++r) {
      p.keys.push_back(keys[r]);
      p.conic.A.push_back(std::move(rows[r]));
      p.conic.b.push_back(rhs[r]);
    }
  }
  p.dims.M = p.conic.num_constraints();
  return p;
}

MatrixXcd complex_from_realified(const MatrixXd& Y) {
  const Eigen::Index s = Y.rows() / 2;
  MatrixXcd X(s, s);
  X.real() = Y.topLeftCorner(s, s) + Y.bottomRightCorner(s, s);
  X.imag() = Y.bottomLeftCorner(s, s) - Y.topRightCorner(s, s);
  return X;
}

MatrixXd realify(const MatrixXcd& X) {
  const Eigen::Index s = X.rows();
  MatrixXd Y(2 * s, 2 * s);
  Y.topLeftCorner(s, s) = X.real();
  Y.topRightCorner(s, s) = -X.imag();
  Y.bottomLeftCorner(s, s) = X.imag();
  Y.bottomRightCorner(s, s) = X.real();
  return Y;
}

namespace {

// Visits the coefficient mismatch E_alpha = [B^H X B]_alpha - H_alpha + h delta_alpha
// for every alpha reachable by the basis or present in H.
template <class F>
void for_each_mismatch(const TrigPolyMatrix& H, const MonomialBasis& basis, const MatrixXcd& X, double h, F&& f) {
  const int n = H.dim();
  const auto pairs = difference_pairs(basis);
  MatrixXcd E(n, n);
  for (const auto& [alpha, list] : pairs) {
    const bool zero = is_zero_index(alpha);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cplx s{};
        for (const auto& [b, c] : list) s += X(b * n + i, c * n + j);
        cplx target = H(i, j).coeff(alpha);
        if (zero && i == j) target -= h;
        E(i, j) = s - target;
      }
    f(E);
  }
  for (const auto& alpha : H.support())
    if (!pairs.count(alpha)) f(H.coeff_matrix(alpha));
}

}  // namespace

double gram_residual(const TrigPolyMatrix& H, const MonomialBasis& basis, const MatrixXcd& X, double h) {
  double worst = 0.0;
  for_each_mismatch(H, basis, X, h, [&](const MatrixXcd& E) { worst = std::max(worst, E.cwiseAbs().maxCoeff()); });
  return worst;
}

double gram_error_bound(const TrigPolyMatrix& H, const MonomialBasis& basis, const MatrixXcd& X, double h) {
  double total = 0.0;
  for_each_mismatch(H, basis, X, h, [&](const MatrixXcd& E) { total += E.norm(); });
  return total;
}

namespace {

// Ray for the feasibility layout recovered from the lower-bound dual: with
// Z = I - sum y'_r A'_r, the vector y below satisfies sum y_r A_r = -Z and
// b.y = -n h.
VectorXd feasibility_ray_from_lower_bound_dual(const SdpProblem& p, const VectorXd& ylb) {
  const int n = p.n;
  const int rows = p.dims.M + 1;
  VectorXd y(rows);
  double shift = 0.0;
  for (int i = 1; i < n; ++i) shift += ylb(i - 1);
  y(0) = -(1.0 + shift);
  for (int i = 1; i < n; ++i) y(i) = -(1.0 - ylb(i - 1));
  for (int r = n; r < rows; ++r) y(r) = ylb(r - 1);
  return y;
}

FarkasRay make_ray(const ConicProblem& feas, const VectorXd& y) {
  FarkasRay ray;
  ray.y = y;
  const VectorXd b = Eigen::Map<const VectorXd>(feas.b.data(), feas.num_constraints());
  ray.b_dot_y = b.dot(y);
  MatrixXd aty;
  VectorXd lp;
  apply_At(feas, y, aty, lp);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(aty, Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues()(es.eigenvalues().size() - 1);
  ray.cone_residual = ray.b_dot_y > 0.0 ? std::max(0.0, lmax) / ray.b_dot_y : std::max(0.0, lmax);
  return ray;
}

}  // namespace

RelaxationOutcome solve_relaxation(const SdpProblem& p, const SolverConfig& cfg) {
  const SolverResult res = solve(p.conic, cfg);
  if (res.status == SolverStatus::Refused) return Indeterminate{res.message, res.status};

  const bool lb_mode = p.mode == RelaxationMode::MaximizeLowerBound;
  if (res.status == SolverStatus::Optimal) {
    const double h = lb_mode ? (p.trace_constant - res.primal_objective) / p.n : 0.0;
    if (lb_mode && h < 0.0) {
      const SdpProblem feas = build_relaxation(p.target, p.basis.k, RelaxationMode::Feasibility);
      FarkasRay ray = make_ray(feas.conic, feasibility_ray_from_lower_bound_dual(p, res.y));
      ray.lower_bound = h;
      ray.iterations = res.iterations;
      return ray;
    }
    GramCertificate cert;
    cert.X = complex_from_realified(res.X);
    cert.basis = p.basis;
    cert.lower_bound = h;
    cert.residual = gram_residual(p.target, p.basis, cert.X, h);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(cert.X, Eigen::EigenvaluesOnly);
    cert.min_eigenvalue = es.eigenvalues()(0);
    const double basis_size = static_cast<double>(p.basis.monomials.size());
    cert.certified_margin = h - gram_error_bound(p.target, p.basis, cert.X, h) -
                            std::max(0.0, -cert.min_eigenvalue) * basis_size;
    cert.iterations = res.iterations;
    return cert;
  }
  if (res.status == SolverStatus::PrimalInfeasible && !lb_mode) {
    FarkasRay ray = make_ray(p.conic, res.ray);
    ray.iterations = res.iterations;
    return ray;
  }
  return Indeterminate{std::string(to_string(res.status)) + ": " + res.message, res.status};
}

std::vector<std::optional<double>> lower_bound_hierarchy(const TrigPolyMatrix& H, int k_min, int k_max,
                                                         const SolverConfig& cfg) {
  if (k_min > k_max) throw std::invalid_argument("lower_bound_hierarchy: k_min > k_max");
  std::vector<std::optional<double>> out;
  for (int k = k_min; k <= k_max; ++k) {
    const auto outcome = solve_relaxation(build_relaxation(H, k, RelaxationMode::MaximizeLowerBound), cfg);
    if (const auto* c = std::get_if<GramCertificate>(&outcome))
      out.emplace_back(c->lower_bound);
    else if (const auto* r = std::get_if<FarkasRay>(&outcome))
      out.push_back(r->lower_bound);
    else
      out.emplace_back(std::nullopt);
  }
  return out;
}

void write_sdpa(const ConicProblem& p, std::ostream& out) {
  p.validate();
  out << std::setprecision(17);
  out << p.num_constraints() << "\n";
  const int nblocks = (p.psd_size > 0 ? 1 : 0) + (p.lp_size > 0 ? 1 : 0);
  out << nblocks << "\n";
  bool first = true;
  if (p.psd_size > 0) {
    out << p.psd_size;
    first = false;
  }
  if (p.lp_size > 0) out << (first ? "" : " ") << -p.lp_size;
  out << "\n";
  for (int i = 0; i < p.num_constraints(); ++i) out << (i ? " " : "") << p.b[i];
  out << "\n";
  const int psd_block = 1, lp_block = p.psd_size > 0 ? 2 : 1;
  auto emit = [&](int mat, const SparseSym& s, double sign) {
    for (const auto& e : s.psd)
      out << mat << ' ' << psd_block << ' ' << e.row + 1 << ' ' << e.col + 1 << ' ' << sign * e.value << "\n";
    for (const auto& [i, v] : s.diag)
      out << mat << ' ' << lp_block << ' ' << i + 1 << ' ' << i + 1 << ' ' << sign * v << "\n";
  };
  emit(0, p.C, -1.0);
  for (int i = 0; i < p.num_constraints(); ++i) emit(i + 1, p.A[i], 1.0);
}

namespace {

std::string next_data_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '"' || line[pos] == '*') continue;
    return line;
  }
  throw std::runtime_error("read_sdpa: unexpected end of file");
}

std::vector<double> numbers(std::string line) {
  for (char& ch : line)
    if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
  std::istringstream ss(line);
  std::vector<double> v;
  double x;
  while (ss >> x) v.push_back(x);
  return v;
}

}  // namespace

ConicProblem read_sdpa(std::istream& in) {
  ConicProblem p;
  const auto mline = numbers(next_data_line(in));
  if (mline.empty()) throw std::runtime_error("read_sdpa: missing constraint count");
  const int m = static_cast<int>(mline[0]);
  const auto nbl = numbers(next_data_line(in));
  if (nbl.empty()) throw std::runtime_error("read_sdpa: missing block count");
  const int nblocks = static_cast<int>(nbl[0]);
  const auto sizes = numbers(next_data_line(in));
  if (static_cast<int>(sizes.size()) < nblocks) throw std::runtime_error("read_sdpa: block sizes incomplete");
  int psd_block = 0, lp_block = 0;
  for (int b = 0; b < nblocks; ++b) {
    const int s = static_cast<int>(sizes[b]);
    if (s > 0) {
      if (psd_block) throw std::runtime_error("read_sdpa: only one PSD block is supported");
      psd_block = b + 1;
      p.psd_size = s;
    } else {
      if (lp_block) throw std::runtime_error("read_sdpa: only one diagonal block is supported");
      lp_block = b + 1;
      p.lp_size = -s;
    }
  }
  auto cvec = numbers(next_data_line(in));
  while (static_cast<int>(cvec.size()) < m) {
    auto more = numbers(next_data_line(in));
    cvec.insert(cvec.end(), more.begin(), more.end());
  }
  p.b.assign(cvec.begin(), cvec.begin() + m);
  p.A.resize(m);
  std::string line;
  while (std::getline(in, line)) {
    const auto v = numbers(line);
    if (v.empty()) continue;
    if (v.size() < 5) throw std::runtime_error("read_sdpa: malformed entry line '" + line + "'");
    const int mat = static_cast<int>(v[0]), blk = static_cast<int>(v[1]);
    int i = static_cast<int>(v[2]) - 1, j = static_cast<int>(v[3]) - 1;
    if (mat < 0 || mat > m) throw std::runtime_error("read_sdpa: matrix number out of range");
    SparseSym& target = mat == 0 ? p.C : p.A[mat - 1];
    const double value = mat == 0 ? -v[4] : v[4];
    if (blk == psd_block) {
      if (i > j) std::swap(i, j);
      target.psd.push_back({i, j, value});
    } else if (blk == lp_block) {
      if (i != j) throw std::runtime_error("read_sdpa: off-diagonal entry in diagonal block");
      target.diag.emplace_back(i, value);
    } else {
      throw std::runtime_error("read_sdpa: block number out of range");
    }
  }
  p.validate();
  return p;
}

void export_sdpa(const SdpProblem& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_sdpa: cannot open " + path.string());
  write_sdpa(p.conic, out);
  if (!out) throw std::runtime_error("export_sdpa: write failed for " + path.string());
}

ConicProblem import_sdpa(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("import_sdpa: cannot open " + path.string());
  return read_sdpa(in);
}

}  // namespace strongcert
