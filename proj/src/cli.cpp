#include "strongcert/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "strongcert/numerics.hpp"

namespace strongcert {

using nlohmann::json;

namespace {

int read_positive_int(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(key, "missing");
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw InputError(key, "must be an integer");
  const long long x = v.get<long long>();
  if (x < 1 || x > 64) throw InputError(key, "must be between 1 and 64");
  return static_cast<int>(x);
}

cplx read_entry(const json& v, const std::string& field) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw InputError(field, "must be a number or a [re, im] pair");
}

json torus_json(const TorusPoint& t) { return json(std::vector<double>(t.begin(), t.end())); }

json sos_json(const std::optional<SosEvidence>& s) {
  if (!s) return nullptr;
  return {{"order", s->order},          {"S", s->S},
          {"M", s->M},                  {"lower_bound", s->lower_bound},
          {"certified_margin", s->certified_margin}, {"residual", s->residual},
          {"iterations", s->iterations}};
}

json lower_json(const std::optional<LowerEvidence>& l) {
  if (!l) return nullptr;
  json j = {{"kind", l->kind}, {"order", l->order}, {"bound", l->bound}, {"radius", l->radius}};
  j["theta"] = l->theta ? torus_json(*l->theta) : json(nullptr);
  return j;
}

json dims_json(const SdpDims& d) { return {{"S", d.S}, {"M", d.M}, {"N", d.N}}; }

struct Common {
  std::string input;
  std::string out;
  bool no_timing = false;
};

void emit(const json& j, const Common& c, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot open output file " + c.out);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + c.out);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

DelaySystem parse_system(const json& j) {
  if (!j.is_object()) throw InputError("<root>", "must be a JSON object");
  const int n = read_positive_int(j, "n");
  const int m = read_positive_int(j, "m");
  if (!j.contains("H")) throw InputError("H", "missing");
  const json& H = j.at("H");
  if (!H.is_array()) throw InputError("H", "must be an array of m matrices");
  if (static_cast<int>(H.size()) != m)
    throw InputError("H", "has " + std::to_string(H.size()) + " matrices, expected m = " + std::to_string(m));
  std::vector<ComplexMatrix> mats;
  for (int k = 0; k < m; ++k) {
    const std::string fk = "H[" + std::to_string(k) + "]";
    const json& Mk = H[k];
    if (!Mk.is_array() || static_cast<int>(Mk.size()) != n)
      throw InputError(fk, "must be an array of n = " + std::to_string(n) + " rows");
    ComplexMatrix A(n, n);
    for (int r = 0; r < n; ++r) {
      const std::string fr = fk + "[" + std::to_string(r) + "]";
      const json& row = Mk[r];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw InputError(fr, "must be an array of n = " + std::to_string(n) + " entries");
      for (int c = 0; c < n; ++c) {
        const std::string fe = fr + "[" + std::to_string(c) + "]";
        A(r, c) = read_entry(row[c], fe);
        if (!std::isfinite(A(r, c).real()) || !std::isfinite(A(r, c).imag())) throw InputError(fe, "must be finite");
      }
    }
    mats.push_back(std::move(A));
  }
  return DelaySystem(std::move(mats));
}

DelaySystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("<root>", std::string("invalid JSON: ") + e.what());
  }
  return parse_system(j);
}

json to_json(const GammaTest& t) {
  return {{"gamma", t.gamma},           {"verdict", to_string(t.verdict)}, {"sos", sos_json(t.sos)},
          {"lower", lower_json(t.lower)}, {"trail", t.trail},              {"sdp_infeasible", t.sdp_infeasible}};
}

json to_json(const StabilityReport& r, bool timings) {
  const Bracket& b = r.bracket;
  json bracket = {{"lo", b.lo},
                  {"hi", b.hi},
                  {"lo_certified", b.lo_certified},
                  {"hi_certified", b.hi_certified},
                  {"lo_evidence", lower_json(b.lo_evidence)},
                  {"hi_evidence", sos_json(b.hi_evidence)},
                  {"certified_lo", b.certified_lo ? json(*b.certified_lo) : json(nullptr)},
                  {"certified_hi", b.certified_hi ? json(*b.certified_hi) : json(nullptr)}};
  json probes = json::array();
  for (const auto& p : r.probes) probes.push_back(to_json(p));
  json j = {{"verdict", to_string(r.verdict)},
            {"gamma0_scan", r.gamma0_scan},
            {"scan_argmax", torus_json(r.scan_argmax)},
            {"bracket", bracket},
            {"probes", probes},
            {"orders_used", r.orders_used},
            {"n", r.n},
            {"m", r.m},
            {"default_order", r.default_order},
            {"relaxation", dims_json(r.dims)}};
  if (timings) j["timings"] = r.timings;
  return j;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strong stability of difference equations with multiple delays"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", common.input, "system description (JSON)")->required();
    sub->add_flag("--no-timing", common.no_timing, "omit timings from the report");
  };

  ScanConfig scfg;
  std::string surface;
  auto* scan_cmd = app.add_subcommand("scan", "grid estimate of the strong stability radius");
  add_common(scan_cmd);
  scan_cmd->add_option("--out", common.out, "write the JSON report here");
  scan_cmd->add_option("--N", scfg.N, "grid points per dimension")->check(CLI::Range(2, 1 << 20));
  bool full = false;
  scan_cmd->add_flag("--full", full, "scan all m angles instead of fixing the last one");
  scan_cmd->add_option("--refine", scfg.refine, "local refinement passes")->check(CLI::Range(0, 10));
  scan_cmd->add_option("--surface", surface, "write the scanned surface as CSV");

  CertifyConfig ccfg;
  double gamma = 1.0;
  auto* cert_cmd = app.add_subcommand("certify", "test gamma0 < gamma (default 1)");
  add_common(cert_cmd);
  cert_cmd->add_option("--out", common.out, "write the JSON report here");
  cert_cmd->add_option("--gamma", gamma, "radius to test")->check(CLI::PositiveNumber);
  cert_cmd->add_option("--order", ccfg.order, "SOS relaxation order")->check(CLI::Range(1, 32));

  BisectConfig bcfg;
  auto* bis_cmd = app.add_subcommand("bisect", "certified bracket around gamma0");
  add_common(bis_cmd);
  bis_cmd->add_option("--out", common.out, "write the JSON report here");
  bis_cmd->add_option("--tol", bcfg.tol, "bracket width")->check(CLI::PositiveNumber);
  bis_cmd->add_option("--N", bcfg.scan.N, "grid points per dimension")->check(CLI::Range(2, 1 << 20));
  bis_cmd->add_option("--order", bcfg.certify.order, "SOS relaxation order")->check(CLI::Range(1, 32));

  std::string format = "sdpa", sdpa_path;
  int export_order = 0;
  double export_gamma = 1.0;
  auto* exp_cmd = app.add_subcommand("export", "write the SOS relaxation without solving it");
  add_common(exp_cmd);
  exp_cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"sdpa"}));
  exp_cmd->add_option("--out", sdpa_path, "SDPA file to write")->required();
  exp_cmd->add_option("--order", export_order, "relaxation order")->check(CLI::Range(1, 32));
  exp_cmd->add_option("--gamma", export_gamma, "radius")->check(CLI::PositiveNumber);

  int kmax = 4;
  double bounds_gamma = 1.0;
  auto* bnd_cmd = app.add_subcommand("bounds", "evp hierarchy of upper bounds");
  add_common(bnd_cmd);
  bnd_cmd->add_option("--out", common.out, "write the JSON report here");
  bnd_cmd->add_option("--kmax", kmax, "largest order")->check(CLI::Range(1, 32));
  bnd_cmd->add_option("--gamma", bounds_gamma, "radius")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const DelaySystem sys = load_system(common.input);
    const auto t0 = std::chrono::steady_clock::now();

    if (*scan_cmd) {
      scfg.use_simplified = !full;
      scfg.keep_surface = !surface.empty();
      const ScanResult r = scan(sys, scfg);
      if (!surface.empty()) export_surface(r, surface);
      json j = {{"command", "scan"},
                {"n", sys.n},
                {"m", sys.m},
                {"N", r.N},
                {"simplified", scfg.use_simplified},
                {"gamma0_scan", r.gamma0_estimate},
                {"coarse_estimate", r.coarse_estimate},
                {"argmax", torus_json(r.argmax)},
                {"eigenproblems", r.eigenproblems},
                {"refine_eigenproblems", r.refine_eigenproblems},
                {"failures", r.failures},
                {"norm_sum", norm_sum(sys)},
                {"norm_sufficient", norm_sum(sys) < 1.0}};
      if (!common.no_timing) j["timings"] = {{"scan", seconds_since(t0)}};
      emit(j, common, out);
      return 0;
    }
    if (*cert_cmd) {
      const Pipeline pipe(sys);
      const GammaTest t = strong_stability_test(pipe, gamma, ccfg);
      json j = to_json(t);
      j["command"] = "certify";
      j["n"] = sys.n;
      j["m"] = sys.m;
      const int k = ccfg.order > 0 ? ccfg.order : pipe.default_order();
      j["relaxation"] = dims_json(relaxation_dims(build_hermite(pipe.p, gamma).H, k, RelaxationMode::MaximizeLowerBound));
      j["relaxation"]["order"] = k;
      if (!common.no_timing) j["timings"] = {{"certify", seconds_since(t0)}};
      emit(j, common, out);
      return is_certified(t.verdict) ? 0 : 2;
    }
    if (*bis_cmd) {
      const StabilityReport r = bisect_radius(sys, bcfg);
      json j = to_json(r, !common.no_timing);
      j["command"] = "bisect";
      emit(j, common, out);
      return is_certified(r.verdict) ? 0 : 2;
    }
    if (*exp_cmd) {
      const Pipeline pipe(sys);
      const HermiteMatrix H = build_hermite(pipe.p, export_gamma);
      const int k = export_order > 0 ? std::max(export_order, minimal_order(H.H)) : pipe.default_order();
      const SdpProblem p = build_relaxation(H, k, RelaxationMode::MaximizeLowerBound);
      export_sdpa(p, sdpa_path);
      json j = {{"command", "export"}, {"format", format}, {"path", sdpa_path}, {"order", k},
                {"gamma", export_gamma}, {"relaxation", dims_json(p.dims)}};
      if (!common.no_timing) j["timings"] = {{"export", seconds_since(t0)}};
      Common to_stdout = common;
      to_stdout.out.clear();
      emit(j, to_stdout, out);
      return 0;
    }
    if (*bnd_cmd) {
      const Pipeline pipe(sys);
      const HermiteMatrix H = build_hermite(pipe.p, bounds_gamma);
      json rows = json::array();
      for (int k = 1; k <= kmax; ++k) {
        const UpperBound ub = upper_bound(H.H, k);
        rows.push_back({{"k", k}, {"size", ub.probe.size()}, {"upper", ub.value}});
      }
      json j = {{"command", "bounds"}, {"gamma", bounds_gamma}, {"n", sys.n}, {"m", sys.m}, {"rows", rows}};
      if (!common.no_timing) j["timings"] = {{"bounds", seconds_since(t0)}};
      emit(j, common, out);
      return 0;
    }
  } catch (const InputError& e) {
    err << "error: " << common.input << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace strongcert
