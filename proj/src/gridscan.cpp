#include "strongcert/gridscan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

namespace strongcert {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Evaluates r_sigma at grid points; one instance per thread.
class RadiusEvaluator {
 public:
  explicit RadiusEvaluator(const DelaySystem& sys, bool simplified)
      : sys_(sys), simplified_(simplified), work_(sys.n, sys.n), schur_(sys.n) {
    schur_.setMaxIterations(30 * sys.n);
  }

  // Angles for the first `dims` matrices; in simplified mode H_m enters with coefficient 1.
  std::optional<double> operator()(const double* theta, int dims) {
    work_.setZero();
    for (int k = 0; k < dims; ++k) work_ += std::polar(1.0, -theta[k]) * sys_.H[k];
    if (simplified_) work_ += sys_.H[sys_.m - 1];
    schur_.compute(work_, false);
    if (schur_.info() != Eigen::Success) return std::nullopt;
    double r = 0.0;
    const auto& t = schur_.matrixT();
    for (Eigen::Index i = 0; i < t.rows(); ++i) r = std::max(r, std::abs(t(i, i)));
    return r;
  }

 private:
  const DelaySystem& sys_;
  bool simplified_;
  ComplexMatrix work_;
  Eigen::ComplexSchur<ComplexMatrix> schur_;
};

struct Best {
  double value = -1.0;
  std::uint64_t index = 0;
  std::uint64_t failures = 0;
};

// Lexicographic grid with the first coordinate varying fastest.
void decode(std::uint64_t idx, int dims, int per_dim, const std::vector<double>& lo, double step,
            std::vector<double>& theta) {
  for (int k = 0; k < dims; ++k) {
    theta[k] = lo[k] + step * static_cast<double>(idx % per_dim);
    idx /= per_dim;
  }
}

Best scan_box(const DelaySystem& sys, bool simplified, int dims, int per_dim,
              const std::vector<double>& lo, double step, int threads, std::vector<double>* surface) {
  std::uint64_t total = 1;
  for (int k = 0; k < dims; ++k) total *= static_cast<std::uint64_t>(per_dim);
  threads = static_cast<int>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, total / 64 + 1)));

  std::vector<Best> partial(threads);
  auto worker = [&](int t) {
    RadiusEvaluator eval(sys, simplified);
    std::vector<double> theta(std::max(dims, 1), 0.0);
    const std::uint64_t begin = total * t / threads, end = total * (t + 1) / threads;
    Best& best = partial[t];
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      decode(idx, dims, per_dim, lo, step, theta);
      auto r = eval(theta.data(), dims);
      if (!r) {
        ++best.failures;
        if (surface) (*surface)[idx] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      if (surface) (*surface)[idx] = *r;
      if (*r > best.value) best = {*r, idx, best.failures};
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }
  // Chunks are in index order, so a strict comparison keeps the lowest index on ties.
  Best out;
  for (const auto& b : partial) {
    out.failures += b.failures;
    if (b.value > out.value) {
      out.value = b.value;
      out.index = b.index;
    }
  }
  return out;
}

}  // namespace

int default_thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("STRONGCERT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return cap;
  }
  return hw;
}

ScanResult scan(const DelaySystem& sys, const ScanConfig& cfg) {
  sys.validate();
  if (cfg.N < 2) throw std::invalid_argument("scan: N must be at least 2");
  const int dims = cfg.use_simplified ? sys.m - 1 : sys.m;
  const int threads = cfg.threads > 0 ? cfg.threads : default_thread_count();

  ScanResult res;
  res.grid_dims = dims;
  res.N = cfg.N;
  std::uint64_t total = 1;
  for (int k = 0; k < dims; ++k) total *= static_cast<std::uint64_t>(cfg.N);
  res.eigenproblems = total;

  std::vector<double> surface;
  if (cfg.keep_surface) surface.resize(total);
  double step = kTwoPi / cfg.N;
  Best best = scan_box(sys, cfg.use_simplified, dims, cfg.N, std::vector<double>(dims, 0.0), step, threads,
                       cfg.keep_surface ? &surface : nullptr);
  res.failures = best.failures;
  if (best.value < 0.0) throw std::runtime_error("scan: eigensolver failed at every grid point");

  std::vector<double> center(std::max(dims, 1), 0.0);
  decode(best.index, dims, cfg.N, std::vector<double>(dims, 0.0), step, center);
  res.coarse_estimate = best.value;
  double value = best.value;

  // Each pass: 21 points per axis spanning +-step around the current argmax.
  for (int pass = 0; pass < cfg.refine && dims > 0; ++pass) {
    const double fine = step / 10.0;
    std::vector<double> lo(dims);
    for (int k = 0; k < dims; ++k) lo[k] = center[k] - step;
    Best b = scan_box(sys, cfg.use_simplified, dims, 21, lo, fine, threads, nullptr);
    std::uint64_t cnt = 1;
    for (int k = 0; k < dims; ++k) cnt *= 21;
    res.refine_eigenproblems += cnt;
    res.failures += b.failures;
    if (b.value > value) {
      value = b.value;
      decode(b.index, dims, 21, lo, fine, center);
    }
    step = fine;
  }

  res.gamma0_estimate = value;
  res.argmax.assign(sys.m, 0.0);
  for (int k = 0; k < dims; ++k) {
    double a = std::fmod(center[k], kTwoPi);
    res.argmax[k] = a < 0.0 ? a + kTwoPi : a;
  }
  if (cfg.keep_surface) res.surface = std::move(surface);
  return res;
}

double scalar_formula(const DelaySystem& sys) {
  sys.validate();
  if (sys.n != 1) throw std::invalid_argument("scalar_formula: requires n == 1");
  double s = 0.0;
  for (const auto& h : sys.H) s += std::abs(h(0, 0));
  return s;
}

double norm_sum(const DelaySystem& sys) {
  double s = 0.0;
  for (const auto& h : sys.H) s += Eigen::JacobiSVD<ComplexMatrix>(h).singularValues()(0);
  return s;
}

bool norm_sufficient(const DelaySystem& sys) {
  sys.validate();
  return norm_sum(sys) < 1.0;
}

void export_surface(const ScanResult& res, const std::filesystem::path& path) {
  if (!res.surface) throw std::invalid_argument("export_surface: scan did not retain its surface");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_surface: cannot open " + path.string());
  out << std::setprecision(10);
  const double step = kTwoPi / res.N;
  std::vector<double> theta(std::max(res.grid_dims, 1));
  const std::vector<double> lo(res.grid_dims, 0.0);
  for (std::uint64_t idx = 0; idx < res.surface->size(); ++idx) {
    decode(idx, res.grid_dims, res.N, lo, step, theta);
    for (int k = 0; k < res.grid_dims; ++k) out << theta[k] << ',';
    out << (*res.surface)[idx] << '\n';
  }
  if (!out) throw std::runtime_error("export_surface: write failed for " + path.string());
}

TorusPoint to_polynomial_point(const TorusPoint& theta) {
  TorusPoint out(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    double a = std::fmod(-theta[k], kTwoPi);
    out[k] = a < 0.0 ? a + kTwoPi : a;
  }
  return out;
}

}  // namespace strongcert
