#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mqg/fibered.hpp"
#include "mqg/haar.hpp"
#include "mqg/report.hpp"

namespace mqg {

struct GActionDesc {
  std::vector<std::string> points;
  std::vector<std::pair<std::string, std::string>> theta;  // point -> weight text
  std::vector<std::pair<std::string, std::string>> flat;   // point -> unit
  std::vector<std::array<std::string, 3>> act;             // [x, g, x.g]
};

/// Finite right G-space: points with weights, fibration onto units, action
/// table defined exactly on the fiber product.
struct GAction {
  const MeasuredGroupoid* mg = nullptr;
  std::vector<std::string> point_ids;
  Eigen::VectorXd theta;
  std::vector<int> flat;  // point -> unit
  Eigen::MatrixXi act;    // (point, morphism) -> point, -1 off the fiber product

  int n_points() const { return static_cast<int>(point_ids.size()); }
  int point_index(const std::string& id) const;
};

GAction validate_action(const MeasuredGroupoid& mg, const GActionDesc& desc);
GAction make_action(const MeasuredGroupoid& mg, std::vector<std::string> points,
                    Eigen::VectorXd theta, std::vector<int> flat, Eigen::MatrixXi act);

/// Weighted l^2 space on the fiber product {(x,g) : flat(x) = r(g)} with
/// weight theta(x) * lam(g).
struct ActionSpace {
  std::vector<std::pair<int, int>> idx;
  Eigen::VectorXd w;
  int find(int x, int g) const;
  int size() const { return static_cast<int>(idx.size()); }

  std::vector<std::vector<int>> by_point;  // indices grouped by x
};

ActionSpace action_space(const GAction& a);

/// a(f)(x,g) = f(x.g) as values on the fiber product; b(phi) = phi o flat.
Vec action_coaction(const GAction& a, const ActionSpace& sp, const Vec& f);
/// Checks (a * id) a = (id * Gamma) a and a(b(phi)) = 1 (x) s(phi) pointwise.
Report verify_coaction(const GAction& a, double tol = 1e-9);

/// Convolution product, involution and the regular representation of the
/// transformation groupoid on the weighted fiber product.
Vec conv_star(const GAction& a, const ActionSpace& sp, const Vec& f, const Vec& g);
Vec conv_sharp(const GAction& a, const ActionSpace& sp, const Vec& f);
Mat conv_rep(const GAction& a, const ActionSpace& sp, const Vec& f);
/// Multiplication by f(x.g).
Mat conv_mult_a(const GAction& a, const ActionSpace& sp, const Vec& f);
/// Unitary right translations: xi(x,g) -> sum k(h) delta(h)^{-1/2} xi(x, gh).
Mat conv_rho(const GAction& a, const ActionSpace& sp, const Vec& k);

/// Weighted adjoint on an ActionSpace.
Mat action_adjoint(const ActionSpace& sp, const Mat& m);

/// Orbit-constant functions: one indicator per orbit.
std::vector<Vec> fixed_point_algebra(const GAction& a);

struct InvarianceReport {
  bool invariant = true;
  double residual = 0.0;
  std::string witness;  // arrow where invariance fails
  bool derivative_fixed = true;
  double derivative_residual = 0.0;
};

InvarianceReport check_invariant_measure(const GAction& a, const Eigen::VectorXd& theta2,
                                         double tol = 1e-9);

/// T(f)(x) = sum over g in the flat(x) range fiber of f(x.g) lam(g).
Vec action_operator_weight(const GAction& a, const Vec& f);
/// Diagnostic: is T(f) orbit constant (relative spread per orbit)?
double operator_weight_fixed_residual(const GAction& a, const Vec& tf);

}  // namespace mqg
