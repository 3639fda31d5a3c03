#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "mqg/errors.hpp"
#include "mqg/haar.hpp"

namespace mqg {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

enum class BaseMap { S, R, M, MHat };

const char* base_map_name(BaseMap f);

/// Everything needed to evaluate base maps and build weighted spaces over a
/// measured groupoid; the middle maps and subgroupoid data are present only
/// when the context comes from a matched pair.
struct FiberContext {
  const Groupoid* g = nullptr;
  Eigen::VectorXd mu;   // per morphism
  Eigen::VectorXd nu;   // per unit
  Eigen::VectorXd lam;  // fiber weights
  Eigen::VectorXd delta;
  std::vector<int> mid;     // morphism -> unit, empty without a matched pair
  std::vector<int> midhat;  // morphism -> unit

  int map(BaseMap f, int mor) const;
  bool has(BaseMap f) const;
};

FiberContext fiber_context(const MeasuredGroupoid& mg);

/// A leg of a tuple space: which measure weights it and an optional
/// membership filter (used for subgroupoid kernel spaces).
struct LegDef {
  const Eigen::VectorXd* measure = nullptr;   // defaults to ambient mu
  const std::vector<char>* filter = nullptr;  // defaults to all morphisms
};

/// fa(leg a) == fb(leg b)
struct Constraint {
  int a;
  BaseMap fa;
  int b;
  BaseMap fb;
};

/// Weighted l^2 space on a constrained tuple set. The weight of a tuple is
/// the product of the leg measures divided by nu at each constraint value,
/// which realizes the iterated relative tensor product pairing.
struct TupleSpace {
  int arity = 0;
  std::vector<std::array<int, 3>> tup;
  Eigen::VectorXd w;
  std::vector<Constraint> cons;
  std::string key;

  int size() const { return static_cast<int>(tup.size()); }
  int find(int a, int b = -1, int c = -1) const;

  std::unordered_map<int64_t, int> lookup;
  int64_t pack(int a, int b, int c) const;
  int shift = 0;
};

/// Builds, owns and caches tuple spaces for one context, so that identical
/// constraint sets give pointer-identical spaces.
class SpaceStore {
public:
  explicit SpaceStore(FiberContext ctx) : ctx_(std::move(ctx)) {}

  const FiberContext& ctx() const { return ctx_; }
  const TupleSpace* l2();
  const TupleSpace* pair(BaseMap i, BaseMap j);
  const TupleSpace* triple(Constraint c1, Constraint c2);
  const TupleSpace* cached(int arity, std::vector<Constraint> cons);
  /// Uncached custom space (stable pointer, owned by the store).
  const TupleSpace* custom(int arity, std::vector<Constraint> cons, std::vector<LegDef> legs);

private:
  const TupleSpace* build(int arity, std::vector<Constraint> cons, std::vector<LegDef> legs,
                          bool cache);
  FiberContext ctx_;
  std::vector<std::unique_ptr<TupleSpace>> owned_;
  std::unordered_map<std::string, const TupleSpace*> cache_;
};

/// Dense operator between tuple spaces, entries in pointwise coordinates.
struct LinOp {
  const TupleSpace* dom = nullptr;
  const TupleSpace* cod = nullptr;
  Mat a;

  LinOp() = default;
  LinOp(const TupleSpace* d, const TupleSpace* c) : dom(d), cod(c), a(Mat::Zero(c->size(), d->size())) {}
  LinOp(const TupleSpace* d, const TupleSpace* c, Mat m) : dom(d), cod(c), a(std::move(m)) {}

  static LinOp identity(const TupleSpace* s);

  LinOp operator*(const LinOp& rhs) const;
  LinOp operator+(const LinOp& rhs) const;
  LinOp operator-(const LinOp& rhs) const;
  LinOp operator*(cx scalar) const;
  /// Adjoint in the weighted inner products.
  LinOp adjoint() const;
  /// Weight-conjugated matrix: unitaries become literal unitaries here.
  Mat flat() const;
};

cx inner(const TupleSpace& sp, const Vec& x, const Vec& y);
double max_abs(const LinOp& x);
double max_abs_diff(const LinOp& x, const LinOp& y);
double fro_flat_diff(const LinOp& x, const LinOp& y);
/// max of ||A*A-1||_F and ||AA*-1||_F in flat coordinates.
double unitarity_residual(const LinOp& x);

/// Diagonal multiplication by values(tuple index).
LinOp diag_mult(const TupleSpace* sp, const Vec& values);
/// Multiplication by n(map(leg)) for a function n on units.
LinOp mult_by_unit_fn(const FiberContext& ctx, const TupleSpace* sp, int leg, BaseMap f,
                      const Vec& n);

/// Coordinate permutation between tuple spaces: out[k] = in[perm[k]].
/// Returns the target space and the (weight-preserving) permutation operator.
std::pair<const TupleSpace*, LinOp> flip(SpaceStore& store, const TupleSpace* src,
                                         const std::vector<int>& perm);

/// x acting on one leg of a space, identity elsewhere. Throws LegMismatch if
/// x does not preserve the fibers of the constraint maps touching that leg.
LinOp amplify_single(const FiberContext& ctx, const LinOp& x, int leg, const TupleSpace* sp);

/// Pair operator acting on legs (la, lb) of src/dst tuple spaces.
LinOp amplify_pair(const LinOp& w, int la, int lb, const TupleSpace* src, const TupleSpace* dst);

/// a |-> a (x) xi  (fixed vector xi on leg `fixed_leg`, a on the other leg).
LinOp embed(const TupleSpace* l2sp, const TupleSpace* pairsp, int fixed_leg, const Vec& xi);

enum class Side { Left, Right };

/// The operator S on l2(G) with <S a, b> = <W(a (x) xi), b (x) eta> for the
/// right slice (xi, eta on leg 1); the left slice fixes leg 0.
LinOp slice(const TupleSpace* l2sp, const LinOp& w, Side side, const Vec& xi, const Vec& eta);

/// Orthonormalized span of operators (flat coordinates, vectorized).
struct OpSpan {
  Eigen::MatrixXcd q;  // orthonormal columns
  int dim = 0;
  int rows = 0;
};

OpSpan make_span(const std::vector<LinOp>& ops, double tol = 1e-9);
double off_span_residual(const OpSpan& span, const LinOp& op);
/// max over ops of the relative distance to the span.
double span_containment(const OpSpan& span, const std::vector<LinOp>& ops);

}  // namespace mqg
