#include "strongcert/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "strongcert/numerics.hpp"

namespace strongcert {

namespace {

void check_inputs(const std::vector<TrigPoly>& p, double gamma) {
  if (p.size() < 2) throw std::invalid_argument("hermite: need coefficients p_0..p_n with n >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("hermite: gamma must be positive");
  const TrigPoly& lead = p.back();
  const MultiIndex zero(lead.nvars(), 0);
  if (lead.size() != 1 || std::abs(lead.coeff(zero) - cplx(1.0)) > 1e-12)
    throw std::invalid_argument("hermite: leading coefficient p_n must be the constant 1");
}

}  // namespace

std::vector<TrigPoly> scale_coefficients(const std::vector<TrigPoly>& p, double gamma) {
  check_inputs(p, gamma);
  const int n = static_cast<int>(p.size()) - 1;
  std::vector<TrigPoly> out;
  out.reserve(p.size());
  for (int j = 0; j <= n; ++j) out.push_back(scale(p[j], 1.0 / std::pow(gamma, n - j)));
  return out;
}

HermiteMatrix build_hermite(const std::vector<TrigPoly>& p, double gamma) {
  const auto ps = scale_coefficients(p, gamma);
  const int n = static_cast<int>(ps.size()) - 1;
  const int m = ps.front().nvars();

  // S1(r,c) = p_{n-(c-r)}, S2(r,c) = p_{c-r} for c >= r. With complex
  // coefficients the S2 factor enters conjugated: H = S1^H S1 - S2^T conj(S2).
  auto s1 = [&](int r, int c) -> const TrigPoly* { return c >= r ? &ps[n - (c - r)] : nullptr; };
  auto s2 = [&](int r, int c) -> const TrigPoly* { return c >= r ? &ps[c - r] : nullptr; };

  std::vector<TrigPoly> conj_ps;
  conj_ps.reserve(ps.size());
  for (const auto& q : ps) conj_ps.push_back(conj(q));
  auto conj_of = [&](const TrigPoly* q) -> const TrigPoly& { return conj_ps[q - ps.data()]; };

  TrigPolyMatrix h(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      TrigPoly acc(m);
      for (int r = 0; r <= std::min(i, j); ++r) {
        acc = acc + conj_of(s1(r, i)) * *s1(r, j);
        acc = acc - *s2(r, i) * conj_of(s2(r, j));
      }
      h(i, j) = acc;
      if (i != j) h(j, i) = conj(acc);
    }
  }
  return {std::move(h), gamma};
}

double max_root_modulus(const std::vector<TrigPoly>& p, const TorusPoint& theta, double gamma) {
  check_inputs(p, gamma);
  const int n = static_cast<int>(p.size()) - 1;
  std::vector<std::complex<double>> c(p.size());
  for (int j = 0; j <= n; ++j) c[j] = eval(p[j], theta) / std::pow(gamma, n - j);
  double r = 0.0;
  for (const auto& z : roots_via_companion(c)) r = std::max(r, std::abs(z));
  return r;
}

bool pointwise_stability_oracle(const std::vector<TrigPoly>& p, const TorusPoint& theta, double gamma) {
  return max_root_modulus(p, theta, gamma) < 1.0;
}

}  // namespace strongcert
