#include "mqg/fibered.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mqg {

const char* base_map_name(BaseMap f) {
  switch (f) {
    case BaseMap::S: return "s";
    case BaseMap::R: return "r";
    case BaseMap::M: return "m";
    case BaseMap::MHat: return "mhat";
  }
  return "?";
}

int FiberContext::map(BaseMap f, int mor) const {
  switch (f) {
    case BaseMap::S: return g->src[mor];
    case BaseMap::R: return g->rng[mor];
    case BaseMap::M:
      if (mid.empty())
        throw ValidationError(errkind::UnknownMapCombination, "middle map needs a matched pair");
      return mid[mor];
    case BaseMap::MHat:
      if (midhat.empty())
        throw ValidationError(errkind::UnknownMapCombination, "mhat map needs a matched pair");
      return midhat[mor];
  }
  return -1;
}

bool FiberContext::has(BaseMap f) const {
  if (f == BaseMap::M) return !mid.empty();
  if (f == BaseMap::MHat) return !midhat.empty();
  return true;
}

FiberContext fiber_context(const MeasuredGroupoid& mg) {
  FiberContext ctx;
  ctx.g = &mg.g;
  ctx.mu = mg.mod.mu;
  ctx.nu = mg.h.nu;
  ctx.lam = mg.h.lam;
  ctx.delta = mg.mod.delta;
  return ctx;
}

int64_t TupleSpace::pack(int a, int b, int c) const {
  const int64_t n = shift;
  return ((int64_t)(a + 1) * n + (b + 1)) * n + (c + 1);
}

int TupleSpace::find(int a, int b, int c) const {
  auto it = lookup.find(pack(a, b, c));
  return it == lookup.end() ? -1 : it->second;
}

namespace {

Constraint normalized(Constraint c) {
  if (c.a > c.b) std::swap(c.a, c.b), std::swap(c.fa, c.fb);
  return c;
}

std::string space_key(int arity, const std::vector<Constraint>& cons,
                      const std::vector<LegDef>& legs) {
  std::ostringstream os;
  os << arity;
  for (const auto& c : cons)
    os << "|" << c.a << base_map_name(c.fa) << c.b << base_map_name(c.fb);
  for (const auto& l : legs) os << "#" << (const void*)l.measure << "," << (const void*)l.filter;
  return os.str();
}

}  // namespace

const TupleSpace* SpaceStore::build(int arity, std::vector<Constraint> cons,
                                    std::vector<LegDef> legs, bool cache) {
  for (auto& c : cons) c = normalized(c);
  std::sort(cons.begin(), cons.end(), [](const Constraint& x, const Constraint& y) {
    return std::tie(x.a, x.b, x.fa, x.fb) < std::tie(y.a, y.b, y.fa, y.fb);
  });
  const std::string key = space_key(arity, cons, legs);
  if (cache) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }

  auto sp = std::make_unique<TupleSpace>();
  sp->arity = arity;
  sp->cons = cons;
  sp->key = key;
  sp->shift = ctx_.g->n() + 2;

  const int n = ctx_.g->n();
  const auto measure = [&](int leg) -> const Eigen::VectorXd& {
    if (leg < (int)legs.size() && legs[leg].measure) return *legs[leg].measure;
    return ctx_.mu;
  };
  const auto admit = [&](int leg, int m) {
    if (leg < (int)legs.size() && legs[leg].filter) return (*legs[leg].filter)[m] != 0;
    return true;
  };
  const auto ok = [&](const std::array<int, 3>& t) {
    for (const auto& c : cons)
      if (ctx_.map(c.fa, t[c.a]) != ctx_.map(c.fb, t[c.b])) return false;
    return true;
  };
  const auto weight = [&](const std::array<int, 3>& t) {
    double w = 1.0;
    for (int k = 0; k < arity; ++k) w *= measure(k)[t[k]];
    for (const auto& c : cons) w /= ctx_.nu[ctx_.map(c.fa, t[c.a])];
    return w;
  };

  std::vector<std::array<int, 3>> tuples;
  std::array<int, 3> t{-1, -1, -1};
  if (arity == 1) {
    for (t[0] = 0; t[0] < n; ++t[0])
      if (admit(0, t[0]) && ok(t)) tuples.push_back(t);
  } else if (arity == 2) {
    for (t[0] = 0; t[0] < n; ++t[0]) {
      if (!admit(0, t[0])) continue;
      for (t[1] = 0; t[1] < n; ++t[1])
        if (admit(1, t[1]) && ok(t)) tuples.push_back(t);
    }
  } else if (arity == 3) {
    for (t[0] = 0; t[0] < n; ++t[0]) {
      if (!admit(0, t[0])) continue;
      for (t[1] = 0; t[1] < n; ++t[1]) {
        if (!admit(1, t[1])) continue;
        for (t[2] = 0; t[2] < n; ++t[2])
          if (admit(2, t[2]) && ok(t)) tuples.push_back(t);
      }
    }
  } else {
    throw ValidationError(errkind::UnknownMapCombination, "unsupported arity");
  }

  sp->tup = std::move(tuples);
  sp->w.resize(sp->tup.size());
  for (int i = 0; i < sp->size(); ++i) {
    sp->w[i] = weight(sp->tup[i]);
    sp->lookup[sp->pack(sp->tup[i][0], sp->tup[i][1], sp->tup[i][2])] = i;
  }

  const TupleSpace* out = sp.get();
  owned_.push_back(std::move(sp));
  if (cache) cache_[key] = out;
  return out;
}

const TupleSpace* SpaceStore::l2() { return build(1, {}, {}, true); }

const TupleSpace* SpaceStore::pair(BaseMap i, BaseMap j) {
  return build(2, {Constraint{0, i, 1, j}}, {}, true);
}

const TupleSpace* SpaceStore::triple(Constraint c1, Constraint c2) {
  return build(3, {c1, c2}, {}, true);
}

const TupleSpace* SpaceStore::cached(int arity, std::vector<Constraint> cons) {
  return build(arity, std::move(cons), {}, true);
}

const TupleSpace* SpaceStore::custom(int arity, std::vector<Constraint> cons,
                                     std::vector<LegDef> legs) {
  return build(arity, std::move(cons), std::move(legs), false);
}

LinOp LinOp::identity(const TupleSpace* s) {
  return LinOp{s, s, Mat::Identity(s->size(), s->size())};
}

LinOp LinOp::operator*(const LinOp& rhs) const {
  if (dom != rhs.cod)
    throw ValidationError(errkind::UnknownMapCombination, "operator composition space mismatch");
  return LinOp{rhs.dom, cod, a * rhs.a};
}

LinOp LinOp::operator+(const LinOp& rhs) const { return LinOp{dom, cod, a + rhs.a}; }
LinOp LinOp::operator-(const LinOp& rhs) const { return LinOp{dom, cod, a - rhs.a}; }
LinOp LinOp::operator*(cx scalar) const { return LinOp{dom, cod, a * scalar}; }

LinOp LinOp::adjoint() const {
  Mat m(dom->size(), cod->size());
  for (int i = 0; i < dom->size(); ++i)
    for (int j = 0; j < cod->size(); ++j) m(i, j) = std::conj(a(j, i)) * cod->w[j] / dom->w[i];
  return LinOp{cod, dom, std::move(m)};
}

Mat LinOp::flat() const {
  Mat m = a;
  for (int i = 0; i < cod->size(); ++i) m.row(i) *= std::sqrt(cod->w[i]);
  for (int j = 0; j < dom->size(); ++j) m.col(j) /= std::sqrt(dom->w[j]);
  return m;
}

cx inner(const TupleSpace& sp, const Vec& x, const Vec& y) {
  cx acc = 0;
  for (int i = 0; i < sp.size(); ++i) acc += sp.w[i] * x[i] * std::conj(y[i]);
  return acc;
}

double max_abs(const LinOp& x) { return x.a.size() ? x.a.cwiseAbs().maxCoeff() : 0.0; }

double max_abs_diff(const LinOp& x, const LinOp& y) {
  if (x.dom != y.dom || x.cod != y.cod)
    throw ValidationError(errkind::UnknownMapCombination, "residual between mismatched spaces");
  return x.a.size() ? (x.a - y.a).cwiseAbs().maxCoeff() : 0.0;
}

double fro_flat_diff(const LinOp& x, const LinOp& y) {
  if (x.dom != y.dom || x.cod != y.cod)
    throw ValidationError(errkind::UnknownMapCombination, "residual between mismatched spaces");
  return (x.flat() - y.flat()).norm();
}

double unitarity_residual(const LinOp& x) {
  const Mat f = x.flat();
  const double r1 = (f.adjoint() * f - Mat::Identity(f.cols(), f.cols())).norm();
  const double r2 = (f * f.adjoint() - Mat::Identity(f.rows(), f.rows())).norm();
  return std::max(r1, r2);
}

LinOp diag_mult(const TupleSpace* sp, const Vec& values) {
  LinOp op(sp, sp);
  for (int i = 0; i < sp->size(); ++i) op.a(i, i) = values[i];
  return op;
}

LinOp mult_by_unit_fn(const FiberContext& ctx, const TupleSpace* sp, int leg, BaseMap f,
                      const Vec& n) {
  Vec values(sp->size());
  for (int i = 0; i < sp->size(); ++i) values[i] = n[ctx.map(f, sp->tup[i][leg])];
  return diag_mult(sp, values);
}

std::pair<const TupleSpace*, LinOp> flip(SpaceStore& store, const TupleSpace* src,
                                         const std::vector<int>& perm) {
  const int arity = src->arity;
  std::vector<int> inv_perm(arity);
  for (int k = 0; k < arity; ++k) inv_perm[perm[k]] = k;
  std::vector<Constraint> cons;
  for (auto c : src->cons) {
    c.a = inv_perm[c.a];
    c.b = inv_perm[c.b];
    cons.push_back(c);
  }
  const TupleSpace* dst = store.cached(arity, cons);
  LinOp op(src, dst);
  for (int j = 0; j < src->size(); ++j) {
    const auto& s = src->tup[j];
    std::array<int, 3> t{-1, -1, -1};
    for (int k = 0; k < arity; ++k) t[k] = s[perm[k]];
    const int i = dst->find(t[0], t[1], t[2]);
    if (i < 0)
      throw ValidationError(errkind::UnknownMapCombination, "flip target tuple missing");
    op.a(i, j) = 1.0;
    if (std::abs(dst->w[i] - src->w[j]) > 1e-12 * std::max(1.0, std::abs(src->w[j])))
      throw ValidationError(errkind::UnknownMapCombination, "flip is not weight preserving");
  }
  return {dst, std::move(op)};
}

LinOp amplify_single(const FiberContext& ctx, const LinOp& x, int leg, const TupleSpace* sp) {
  // legality: x must preserve the fibers of every map constraining this leg
  const double top = max_abs(x);
  for (const auto& c : sp->cons) {
    BaseMap f;
    if (c.a == leg)
      f = c.fa;
    else if (c.b == leg)
      f = c.fb;
    else
      continue;
    for (int i = 0; i < x.cod->size(); ++i)
      for (int j = 0; j < x.dom->size(); ++j)
        if (std::abs(x.a(i, j)) > 1e-12 * std::max(1.0, top) &&
            ctx.map(f, x.cod->tup[i][0]) != ctx.map(f, x.dom->tup[j][0]))
          throw ValidationError(errkind::LegMismatch,
                                std::string("operator does not respect the ") + base_map_name(f) +
                                    "-fibers on leg " + std::to_string(leg));
  }
  LinOp op(sp, sp);
  for (int i = 0; i < sp->size(); ++i) {
    const auto& t = sp->tup[i];
    const int row = t[leg];
    for (int col = 0; col < ctx.g->n(); ++col) {
      const cx v = x.a(row, col);
      if (v == cx(0)) continue;
      auto s = t;
      s[leg] = col;
      const int j = sp->find(s[0], s[1], s[2]);
      if (j >= 0) op.a(i, j) += v;
    }
  }
  return op;
}

LinOp amplify_pair(const LinOp& w, int la, int lb, const TupleSpace* src, const TupleSpace* dst) {
  LinOp op(src, dst);
  for (int i = 0; i < dst->size(); ++i) {
    const auto& t = dst->tup[i];
    const int row = w.cod->find(t[la], t[lb]);
    if (row < 0)
      throw ValidationError(errkind::UnknownMapCombination,
                            "amplified operator: destination legs not in codomain pair space");
    for (int col = 0; col < w.dom->size(); ++col) {
      const cx v = w.a(row, col);
      if (v == cx(0)) continue;
      auto s = t;
      s[la] = w.dom->tup[col][0];
      s[lb] = w.dom->tup[col][1];
      const int j = src->find(s[0], s[1], s[2]);
      if (j >= 0) op.a(i, j) += v;
    }
  }
  return op;
}

LinOp embed(const TupleSpace* l2sp, const TupleSpace* pairsp, int fixed_leg, const Vec& xi) {
  const int free_leg = 1 - fixed_leg;
  LinOp op(l2sp, pairsp);
  for (int i = 0; i < pairsp->size(); ++i) {
    const auto& t = pairsp->tup[i];
    op.a(i, t[free_leg]) = xi[t[fixed_leg]];
  }
  return op;
}

LinOp slice(const TupleSpace* l2sp, const LinOp& w, Side side, const Vec& xi, const Vec& eta) {
  const int fixed_leg = side == Side::Right ? 1 : 0;
  const LinOp ein = embed(l2sp, w.dom, fixed_leg, xi);
  const LinOp eout = embed(l2sp, w.cod, fixed_leg, eta);
  return eout.adjoint() * w * ein;
}

OpSpan make_span(const std::vector<LinOp>& ops, double tol) {
  OpSpan span;
  if (ops.empty()) return span;
  const int rows = ops[0].a.size();
  Eigen::MatrixXcd m(rows, (int)ops.size());
  for (int k = 0; k < (int)ops.size(); ++k) {
    const Mat f = ops[k].flat();
    m.col(k) = Eigen::Map<const Vec>(f.data(), f.size());
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? sv[0] * tol : 0.0;
  int rank = 0;
  while (rank < sv.size() && sv[rank] > cutoff) ++rank;
  span.q = svd.matrixU().leftCols(rank);
  span.dim = rank;
  span.rows = rows;
  return span;
}

double off_span_residual(const OpSpan& span, const LinOp& op) {
  const Mat f = op.flat();
  Vec v = Eigen::Map<const Vec>(f.data(), f.size());
  const double nv = v.norm();
  if (nv == 0.0) return 0.0;
  const Vec proj = span.q * (span.q.adjoint() * v);
  return (v - proj).norm() / nv;
}

double span_containment(const OpSpan& span, const std::vector<LinOp>& ops) {
  double worst = 0.0;
  for (const auto& op : ops) worst = std::max(worst, off_span_residual(span, op));
  return worst;
}

}  // namespace mqg
