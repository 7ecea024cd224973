#pragma once

// Brute-force evaluation of the strong-stability radius
//   gamma0 = max_theta r_sigma(sum_k H_k exp(-i theta_k))
// on a uniform torus grid, with optional local refinement.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "strongcert/chardet.hpp"

namespace strongcert {

struct ScanConfig {
  int N = 360;                 // points per dimension
  bool use_simplified = true;  // fix theta_m = 0 (homogeneity)
  int refine = 1;              // passes of 10x finer grid around the argmax
  bool keep_surface = false;
  int threads = 0;             // 0: STRONGCERT_THREADS or hardware concurrency
};

struct ScanResult {
  double gamma0_estimate = 0.0;
  double coarse_estimate = 0.0;
  TorusPoint argmax;                   // length m, angles for exp(-i theta)
  int grid_dims = 0;                   // m-1 (simplified) or m
  int N = 0;
  std::optional<std::vector<double>> surface;  // coarse grid, first angle fastest
  std::uint64_t eigenproblems = 0;     // coarse pass only
  std::uint64_t refine_eigenproblems = 0;
  std::uint64_t failures = 0;          // points where the eigensolver did not converge
};

/// Threads to use for embarrassingly parallel loops (STRONGCERT_THREADS caps it).
int default_thread_count();

ScanResult scan(const DelaySystem& sys, const ScanConfig& cfg = {});

/// n == 1 closed form: sum_k |H_k|.
double scalar_formula(const DelaySystem& sys);

/// sum_k ||H_k||_2 < 1 (sufficient for strong stability).
bool norm_sufficient(const DelaySystem& sys);
double norm_sum(const DelaySystem& sys);

/// One CSV row per coarse grid point: theta_1..theta_d, r_sigma. Throws when
/// the surface was not retained or the file cannot be written.
void export_surface(const ScanResult& res, const std::filesystem::path& path);

/// theta in the exp(-i theta) convention mapped to z_k = exp(i theta_k) of the
/// characteristic polynomial (negation modulo 2 pi).
TorusPoint to_polynomial_point(const TorusPoint& theta);

}  // namespace strongcert
