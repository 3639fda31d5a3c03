#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mqg/fibered.hpp"
#include "mqg/haar.hpp"
#include "mqg/report.hpp"

namespace mqg {

/// Raw matched-pair input: ambient groupoid description with Haar data plus
/// the two wide subgroupoids and their own Haar systems over the same nu.
struct MatchedPairDesc {
  GroupoidDesc groupoid;
  std::vector<std::pair<std::string, std::string>> nu;  // unit -> weight text
  std::vector<std::tuple<std::string, std::string, std::string>> haar;  // unit, morphism, weight
  std::vector<std::string> g1, g2;
  std::vector<std::tuple<std::string, std::string, std::string>> haar1, haar2;
};

/// Validated matched pair: ambient measured groupoid, subgroupoid membership,
/// sub-Haar systems with their modular functions, factorization maps and the
/// middle maps.
struct MatchedPair {
  MeasuredGroupoid amb;
  std::vector<char> in1, in2;          // membership per morphism
  std::vector<int> elems1, elems2;     // morphism indices
  Eigen::VectorXd lam1, lam2;          // fiber weights, zero outside the subgroupoid
  Eigen::VectorXd mu1, mu2;            // nu(rng)*lam_i, zero outside
  Eigen::VectorXd delta1, delta2;      // modular functions of the subgroupoids
  std::vector<int> p1, p2;             // g = p1(g) p2(g)
  std::vector<int> p1p, p2p;           // g = p2p(g) p1p(g)
  std::vector<int> mid, midhat;        // morphism -> unit

  FiberContext fiber() const;
};

MatchedPair validate_matched_pair(const MatchedPairDesc& desc, double tol = 1e-9);

/// Builds a MatchedPair from already-validated pieces (used by generators and
/// by the degenerate pairs); runs the same checks.
MatchedPair make_matched_pair(MeasuredGroupoid amb, std::vector<char> in1, std::vector<char> in2,
                              Eigen::VectorXd lam1, Eigen::VectorXd lam2, double tol = 1e-9);

/// The degenerate pair (G1 = unit arrows, G2 = G); its pseudo-multiplicative
/// unitary is the classical one.
MatchedPair degenerate_pair_units_first(const MeasuredGroupoid& mg, double tol = 1e-9);
/// The opposite degenerate pair (G1 = G, G2 = unit arrows).
MatchedPair degenerate_pair_units_second(const MeasuredGroupoid& mg, double tol = 1e-9);

struct DecompositionReport {
  double residual1 = 0.0;  // lambda = (lambda1 x lambda2)-decomposition, pointwise
  double residual2 = 0.0;  // mirrored G2-first identity
  std::string worst1, worst2;
  bool pass(double tol) const { return residual1 <= tol && residual2 <= tol; }
};

DecompositionReport check_haar_decomposition(const MatchedPair& mp);

struct NormalizationResult {
  Eigen::VectorXd k1;  // per unit, rescales lam1 for the G1-first identity
  Eigen::VectorXd k2;  // per unit, rescales lam2 for the mirrored identity
  double fiber_constancy_residual = 0.0;
};

/// Solves for the per-unit density making the Haar decomposition hold; throws
/// NotFiberConstant when the pullback density is not constant on common-source
/// fibers (the data is not a measured matched pair).
NormalizationResult solve_haar_normalization(const MatchedPair& mp, double tol = 1e-9);

/// Returns a copy with lam1 (and lam2) rescaled by k1(src), k2(src).
MatchedPair apply_normalization(const MatchedPair& mp, const Eigen::VectorXd& k1,
                                const Eigen::VectorXd& k2, double tol = 1e-9);

/// Pointwise identities behind the mutual actions: middle-map coherence,
/// coaction law p2(p2(g2 g1) h1) = p2(g2 g1 h1), the base-map relations, and
/// the factorization compatibility p2(phihat(g)) = p2(g)^{-1}.
Report verify_mutual_actions(const MatchedPair& mp, double tol = 1e-9);

/// The (g2, g1) pair space G2 s2 x r1 G1 with the subgroupoid measures.
const TupleSpace* crossed_kernel_space(SpaceStore& store, const MatchedPair& mp);

/// The mutual action a(f)(g2,g1) = f(p2(g2 g1)) as a multiplication operator
/// on the kernel space; f is indexed by ambient morphisms (supported on G2).
Vec mutual_action_a(const MatchedPair& mp, const TupleSpace* ker, const Vec& f);
/// ahat(h)(g1,g2) = h(p1(g2 g1)) on a (g1, g2) pair space.
Vec mutual_action_ahat(const MatchedPair& mp, const TupleSpace* ker_hat, const Vec& h);
const TupleSpace* cokernel_space(SpaceStore& store, const MatchedPair& mp);

/// U xi(g2,g1) = (delta/delta1)^{1/2}(g1) xi(g2 g1), unitary onto the kernel
/// space once the Haar systems are normalized.
LinOp iso_u(SpaceStore& store, const MatchedPair& mp);

}  // namespace mqg
