#pragma once

#include "mqg/fibered.hpp"
#include "mqg/haar.hpp"

namespace mqg {

/// The commutative quantum groupoid carried by a measured groupoid itself:
/// the fundamental unitary W xi(x,y) = xi(x, x^{-1} y) between the weighted
/// pair spaces, the coproduct, the two operator valued weights and the
/// regular representations.
struct ClassicalQG {
  const MeasuredGroupoid* mg = nullptr;
  SpaceStore* store = nullptr;
  const TupleSpace* sr = nullptr;  // composable pairs
  const TupleSpace* rr = nullptr;  // range-matched pairs
  LinOp w;                         // sr -> rr
};

ClassicalQG build_classical(SpaceStore& store, const MeasuredGroupoid& mg);

/// Gamma(f): multiplication by f(xy) on composable pairs.
LinOp classical_gamma(const ClassicalQG& c, const Vec& f);

/// T(f)(g) = sum over the r(g)-fiber of f against the fiber weights; depends
/// only on r(g).
Vec classical_t_left(const MeasuredGroupoid& mg, const Vec& f);
/// T^{-1}(f)(g) integrates over the source fiber with the inverted weights.
Vec classical_t_right(const MeasuredGroupoid& mg, const Vec& f);

/// Left regular representation lambda(f) h(x) = sum f(g) h(g^{-1}x) lam(g).
LinOp lambda_rep(SpaceStore& store, const MeasuredGroupoid& mg, const Vec& f);
/// Right translations rho(k) xi(x) = sum k(g) xi(xg) lam(g) over the source fiber.
LinOp rho_rep(SpaceStore& store, const MeasuredGroupoid& mg, const Vec& f);
/// The dual weight on the regular algebra: lambda(f) |-> r-diagonal of f at units.
LinOp that_of(SpaceStore& store, const MeasuredGroupoid& mg, const Vec& f);

}  // namespace mqg
