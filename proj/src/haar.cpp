#include "mqg/haar.hpp"

#include <cmath>
#include <cstdlib>

namespace mqg {

double parse_weight(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    char* end = nullptr;
    const double p = std::strtod(text.substr(0, slash).c_str(), &end);
    const double q = std::strtod(text.substr(slash + 1).c_str(), &end);
    if (q == 0.0) throw ValidationError(errkind::ParseError, "weight '" + text + "' divides by zero");
    return p / q;
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str())
    throw ValidationError(errkind::ParseError, "cannot parse weight '" + text + "'");
  return v;
}

HaarReport validate_haar(const Groupoid& g, const HaarSystem& h, double tol) {
  if (h.lam.size() != g.n() || h.nu.size() != g.n_units())
    throw ValidationError(errkind::SupportMismatch, "weight vectors have wrong size");
  for (int u = 0; u < g.n_units(); ++u)
    if (!(h.nu[u] > 0.0))
      throw ValidationError(errkind::SupportMismatch, "nu('" + g.uname(u) + "') is not positive");
  for (int m = 0; m < g.n(); ++m)
    if (!(h.lam[m] > 0.0))
      throw ValidationError(errkind::SupportMismatch,
                            "fiber weight of '" + g.mname(m) + "' is not positive");

  HaarReport rep;
  for (int a = 0; a < g.n(); ++a) {
    for (int t : g.r_fiber[g.src[a]]) {
      const int at = g.mul(a, t);
      const double res = std::abs(h.lam[at] - h.lam[t]) / std::max(h.lam[t], 1e-300);
      if (res > rep.max_residual) {
        rep.max_residual = res;
        rep.worst = g.mname(a) + "*" + g.mname(t);
      }
    }
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

ModularData modular_data(const Groupoid& g, const HaarSystem& h) {
  ModularData md;
  const int n = g.n();
  md.mu.resize(n);
  md.mu_inv.resize(n);
  md.delta.resize(n);
  for (int m = 0; m < n; ++m) md.mu[m] = h.nu[g.rng[m]] * h.lam[m];
  for (int m = 0; m < n; ++m) md.mu_inv[m] = md.mu[g.inv[m]];
  for (int m = 0; m < n; ++m) md.delta[m] = md.mu_inv[m] / md.mu[m];

  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.composable(a, b)) {
        const double lhs = md.delta[g.mul(a, b)];
        const double rhs = md.delta[a] * md.delta[b];
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
      }
  md.cocycle_residual = worst;
  return md;
}

MeasuredGroupoid make_measured(Groupoid g, HaarSystem h, double tol) {
  auto rep = validate_haar(g, h, tol);
  if (!rep.pass)
    throw ValidationError(errkind::HaarFail,
                          "left invariance fails at " + rep.worst + " (residual " +
                              std::to_string(rep.max_residual) + ")");
  auto md = modular_data(g, h);
  return MeasuredGroupoid{std::move(g), std::move(h), std::move(md)};
}

}  // namespace mqg
