#pragma once

// Verdicts on strong stability: SOS certificates bound gamma0 from above,
// evp refutations and explicit torus points bound it from below.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strongcert/chardet.hpp"
#include "strongcert/evp.hpp"
#include "strongcert/gridscan.hpp"
#include "strongcert/sdpsolve.hpp"
#include "strongcert/sosgram.hpp"

namespace strongcert {

enum class Verdict { StronglyStable, Unstable, StronglyStableUncertified, UnstableUncertified, Undetermined };

const char* to_string(Verdict v);
bool is_certified(Verdict v);

struct CertifyConfig {
  int order = 0;             // SOS order; 0 means max(n, smallest order representing H)
  int escalations = 2;       // extra orders tried after the first
  int evp_max_order = 8;
  double margin_tol = 1e-7;  // certified margin required for a Gram certificate
  SolverConfig solver;
  EvpConfig evp;
};

struct SosEvidence {
  int order = 0;
  int S = 0;
  int M = 0;
  double lower_bound = 0.0;
  double certified_margin = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

struct LowerEvidence {
  std::string kind;  // "evp" or "witness"
  int order = 0;     // evp order, 0 for a plain witness
  double bound = 0.0;
  std::optional<TorusPoint> theta;  // scan convention: sum_k H_k e^{-i theta_k}
  double radius = 0.0;              // r_sigma at theta
};

/// Outcome of testing gamma0 < gamma.
struct GammaTest {
  double gamma = 1.0;
  Verdict verdict = Verdict::Undetermined;
  std::optional<SosEvidence> sos;
  std::optional<LowerEvidence> lower;
  std::vector<std::string> trail;
  bool sdp_infeasible = false;  // some order returned a Farkas ray or h <= 0
};

/// Builds the characteristic polynomial once; reused across gammas.
struct Pipeline {
  explicit Pipeline(const DelaySystem& sys);
  const DelaySystem& sys;
  std::vector<TrigPoly> p;
  int default_order() const;
};

GammaTest strong_stability_test(const Pipeline& pipe, double gamma, const CertifyConfig& cfg = {});
inline GammaTest strong_stability_test(const DelaySystem& sys, const CertifyConfig& cfg = {}) {
  return strong_stability_test(Pipeline(sys), 1.0, cfg);
}

struct BisectConfig {
  double tol = 1e-3;
  double initial_spread = 0.1;  // bracket starts at scan * (1 -+ spread)
  ScanConfig scan;
  CertifyConfig certify;
};

/// Working bracket [lo, hi] plus the tightest certified ends found. A probe
/// that neither side can certify moves lo without certification.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_certified = false;
  bool hi_certified = false;
  std::optional<double> certified_lo;  // gamma0 >= certified_lo
  std::optional<double> certified_hi;  // gamma0 < certified_hi
  std::optional<LowerEvidence> lo_evidence;
  std::optional<SosEvidence> hi_evidence;
};

struct StabilityReport {
  Verdict verdict = Verdict::Undetermined;
  double gamma0_scan = 0.0;
  TorusPoint scan_argmax;
  Bracket bracket;
  std::vector<GammaTest> probes;
  std::vector<int> orders_used;
  std::map<std::string, double> timings;  // seconds per stage
  int n = 0;
  int m = 0;
  int default_order = 0;
  SdpDims dims;  // of the relaxation at the default order
};

StabilityReport bisect_radius(const DelaySystem& sys, const BisectConfig& cfg = {});

/// Verdict about gamma = 1 implied by a bracket and a scan estimate.
Verdict verdict_from_bracket(const Bracket& b, double gamma0_scan);

}  // namespace strongcert
