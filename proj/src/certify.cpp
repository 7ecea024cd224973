#include "strongcert/certify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "strongcert/numerics.hpp"

namespace strongcert {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::StronglyStable: return "StronglyStable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::StronglyStableUncertified: return "StronglyStableUncertified";
    case Verdict::UnstableUncertified: return "UnstableUncertified";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

bool is_certified(Verdict v) { return v == Verdict::StronglyStable || v == Verdict::Unstable; }

Pipeline::Pipeline(const DelaySystem& s) : sys(s), p(homogenize(sampledet(s))) {}

int Pipeline::default_order() const {
  return std::max(sys.n, minimal_order(build_hermite(p, 1.0).H));
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

GammaTest strong_stability_test(const Pipeline& pipe, double gamma, const CertifyConfig& cfg) {
  GammaTest t;
  t.gamma = gamma;
  const HermiteMatrix H = build_hermite(pipe.p, gamma);
  const int k0 = cfg.order > 0 ? std::max(cfg.order, minimal_order(H.H)) : pipe.default_order();

  for (int k = k0; k <= k0 + cfg.escalations; ++k) {
    const SdpDims dims = relaxation_dims(H.H, k, RelaxationMode::MaximizeLowerBound);
    const std::string tag = "sos order " + std::to_string(k) + " (S=" + std::to_string(dims.S) + "): ";
    if (2 * dims.S > cfg.solver.max_psd_size) {
      t.trail.push_back(tag + "refused, realified block " + std::to_string(2 * dims.S) + " exceeds " +
                        std::to_string(cfg.solver.max_psd_size));
      break;
    }
    const SdpProblem prob = build_relaxation(H, k, RelaxationMode::MaximizeLowerBound);
    const RelaxationOutcome out = solve_relaxation(prob, cfg.solver);
    if (const auto* c = std::get_if<GramCertificate>(&out)) {
      if (c->certified_margin > cfg.margin_tol) {
        t.sos = SosEvidence{k, dims.S, prob.dims.M, c->lower_bound, c->certified_margin, c->residual, c->iterations};
        t.verdict = Verdict::StronglyStable;
        t.trail.push_back(tag + "certified, h=" + fmt(c->lower_bound) + " margin=" + fmt(c->certified_margin));
        return t;
      }
      if (c->lower_bound <= cfg.margin_tol) t.sdp_infeasible = true;
      t.trail.push_back(tag + "not certified, h=" + fmt(c->lower_bound) + " margin=" + fmt(c->certified_margin));
    } else if (const auto* r = std::get_if<FarkasRay>(&out)) {
      t.sdp_infeasible = true;
      t.trail.push_back(tag + "infeasible, Farkas ray with b.y=" + fmt(r->b_dot_y) +
                        (r->lower_bound ? ", h=" + fmt(*r->lower_bound) : std::string()));
    } else {
      t.trail.push_back(tag + "indeterminate, " + std::get<Indeterminate>(out).reason);
    }
  }

  const DisproofResult d = disprove_positivity(H, cfg.evp_max_order, cfg.evp);
  if (d.refutation) {
    LowerEvidence ev;
    ev.kind = "evp";
    ev.order = d.refutation->k;
    ev.bound = d.refutation->bound;
    if (d.refutation->witness) {
      const TorusPoint& w = *d.refutation->witness;
      ev.theta = to_polynomial_point(w);
      ev.radius = spectral_radius(pipe.sys.combination(w, +1)).value_or(0.0);
    }
    t.lower = ev;
    t.verdict = Verdict::Unstable;
    t.trail.push_back("evp order " + std::to_string(ev.order) + ": refuted, h_bar=" + fmt(ev.bound) +
                      (ev.theta ? ", witness radius " + fmt(ev.radius) : std::string(", no witness point found")));
    return t;
  }
  t.trail.push_back("evp: inconclusive through order " + std::to_string(d.max_order_reached) +
                    (d.bounds.empty() ? std::string() : ", h_bar=" + fmt(d.bounds.back())));
  t.verdict = Verdict::Undetermined;
  return t;
}

Verdict verdict_from_bracket(const Bracket& b, double gamma0_scan) {
  if (b.certified_hi && *b.certified_hi <= 1.0) return Verdict::StronglyStable;
  if (b.certified_lo && *b.certified_lo >= 1.0) return Verdict::Unstable;
  if (gamma0_scan < 1.0) return Verdict::StronglyStableUncertified;
  if (gamma0_scan > 1.0) return Verdict::UnstableUncertified;
  return Verdict::Undetermined;
}

StabilityReport bisect_radius(const DelaySystem& sys, const BisectConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("bisect_radius: tolerance must be positive");
  StabilityReport rep;
  rep.n = sys.n;
  rep.m = sys.m;

  auto t0 = std::chrono::steady_clock::now();
  const ScanResult sr = scan(sys, cfg.scan);
  rep.timings["scan"] = elapsed(t0);
  rep.gamma0_scan = sr.gamma0_estimate;
  rep.scan_argmax = sr.argmax;

  t0 = std::chrono::steady_clock::now();
  const Pipeline pipe(sys);
  rep.default_order = pipe.default_order();
  rep.dims = relaxation_dims(build_hermite(pipe.p, 1.0).H, rep.default_order, RelaxationMode::MaximizeLowerBound);

  // The scan argmax is itself a certified lower bound: gamma0 >= r_sigma(theta*).
  const double wr = spectral_radius(sys.combination(sr.argmax, -1)).value_or(0.0);
  LowerEvidence witness{"witness", 0, wr, sr.argmax, wr};

  Bracket& b = rep.bracket;
  std::vector<int> orders;
  auto probe = [&](double g) {
    GammaTest t = strong_stability_test(pipe, g, cfg.certify);
    if (t.sos) orders.push_back(t.sos->order);
    rep.probes.push_back(t);
    return rep.probes.back();
  };
  auto set_lo = [&](double g, const std::optional<LowerEvidence>& ev) {
    b.lo = g;
    b.lo_certified = ev.has_value();
    if (ev && (!b.certified_lo || g > *b.certified_lo)) {
      b.certified_lo = g;
      b.lo_evidence = ev;
    }
  };
  auto set_hi = [&](double g, const std::optional<SosEvidence>& ev) {
    b.hi = g;
    b.hi_certified = ev.has_value();
    if (ev && (!b.certified_hi || g < *b.certified_hi)) {
      b.certified_hi = g;
      b.hi_evidence = ev;
    }
  };

  const double est = sr.gamma0_estimate;
  if (est <= 1e-12) {
    set_lo(0.0, LowerEvidence{"trivial", 0, 0.0, std::nullopt, 0.0});
    b.hi = cfg.tol;
  } else {
    // The witness already certifies gamma0 >= wr, which beats the scan-based lower end.
    if (wr > est * (1.0 - cfg.initial_spread))
      set_lo(wr, witness);
    else
      set_lo(est * (1.0 - cfg.initial_spread), std::nullopt);
    b.hi = est * (1.0 + cfg.initial_spread);
  }
  // Establish the upper end, widening while it is refuted.
  for (int widen = 0; widen < 6; ++widen) {
    const GammaTest& t = probe(b.hi);
    if (t.verdict == Verdict::StronglyStable) {
      set_hi(b.hi, t.sos);
      break;
    }
    if (t.verdict != Verdict::Unstable) break;
    set_lo(b.hi, t.lower);
    b.hi *= 1.0 + std::max(cfg.initial_spread, 0.1);
  }

  while (b.hi - b.lo > cfg.tol) {
    const double mid = 0.5 * (b.lo + b.hi);
    if (wr > mid) {
      set_lo(mid, witness);
      continue;
    }
    const GammaTest& t = probe(mid);
    if (t.verdict == Verdict::StronglyStable)
      set_hi(mid, t.sos);
    else if (t.verdict == Verdict::Unstable)
      set_lo(mid, t.lower);
    else
      set_lo(mid, std::nullopt);  // the relaxation cannot certify mid
  }
  rep.timings["bisect"] = elapsed(t0);

  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  rep.orders_used = orders;
  rep.verdict = verdict_from_bracket(b, est);
  return rep;
}

}  // namespace strongcert
