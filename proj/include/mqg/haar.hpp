#pragma once

#include <Eigen/Dense>
#include <string>

#include "mqg/groupoid.hpp"
#include "mqg/report.hpp"

namespace mqg {

/// Per-unit fiber weights lam(g) = lambda^{rng(g)}(g) together with the unit
/// measure nu. Strict positivity on exactly the range fibers.
struct HaarSystem {
  Eigen::VectorXd lam;  // per morphism
  Eigen::VectorXd nu;   // per unit
};

/// mu(g) = nu(rng g) * lam(g), muInv(g) = mu(g^{-1}), delta = muInv/mu.
struct ModularData {
  Eigen::VectorXd mu;
  Eigen::VectorXd mu_inv;
  Eigen::VectorXd delta;
  double cocycle_residual = 0.0;  // worst |delta(gh) - delta(g)delta(h)| (relative)
};

struct HaarReport {
  bool pass = true;
  double max_residual = 0.0;  // worst left-invariance violation (relative)
  std::string worst;          // morphism pair where it happens
};

/// Left invariance, checked pointwise: lam(g t) == lam(t) for every
/// composable g, t. Throws SupportMismatch if weights are not strictly
/// positive; returns the residual report otherwise.
HaarReport validate_haar(const Groupoid& g, const HaarSystem& h, double tol = 1e-9);

ModularData modular_data(const Groupoid& g, const HaarSystem& h);

/// Validated bundle every later stage consumes.
struct MeasuredGroupoid {
  Groupoid g;
  HaarSystem h;
  ModularData mod;
};

MeasuredGroupoid make_measured(Groupoid g, HaarSystem h, double tol = 1e-9);

/// Weight parsing: accepts decimal strings and exact rationals "p/q".
double parse_weight(const std::string& text);

}  // namespace mqg
