#include "mqg/classical.hpp"

namespace mqg {

ClassicalQG build_classical(SpaceStore& store, const MeasuredGroupoid& mg) {
  ClassicalQG c;
  c.mg = &mg;
  c.store = &store;
  c.sr = store.pair(BaseMap::S, BaseMap::R);
  c.rr = store.pair(BaseMap::R, BaseMap::R);
  c.w = LinOp(c.sr, c.rr);
  const Groupoid& g = mg.g;
  for (int i = 0; i < c.rr->size(); ++i) {
    const auto& t = c.rr->tup[i];  // (x, y) with r(x) = r(y)
    const int x = t[0], y = t[1];
    const int j = c.sr->find(x, g.mul(g.inv[x], y));
    c.w.a(i, j) = 1.0;
  }
  return c;
}

LinOp classical_gamma(const ClassicalQG& c, const Vec& f) {
  const Groupoid& g = c.mg->g;
  Vec values(c.sr->size());
  for (int i = 0; i < c.sr->size(); ++i) {
    const auto& t = c.sr->tup[i];
    values[i] = f[g.mul(t[0], t[1])];
  }
  return diag_mult(c.sr, values);
}

Vec classical_t_left(const MeasuredGroupoid& mg, const Vec& f) {
  const Groupoid& g = mg.g;
  Vec out(g.n());
  for (int m = 0; m < g.n(); ++m) {
    cx acc = 0;
    for (int x : g.r_fiber[g.rng[m]]) acc += f[x] * mg.h.lam[x];
    out[m] = acc;
  }
  return out;
}

Vec classical_t_right(const MeasuredGroupoid& mg, const Vec& f) {
  const Groupoid& g = mg.g;
  Vec out(g.n());
  for (int m = 0; m < g.n(); ++m) {
    cx acc = 0;
    for (int y : g.s_fiber[g.src[m]]) acc += f[y] * mg.h.lam[g.inv[y]];
    out[m] = acc;
  }
  return out;
}

LinOp lambda_rep(SpaceStore& store, const MeasuredGroupoid& mg, const Vec& f) {
  const Groupoid& g = mg.g;
  LinOp op(store.l2(), store.l2());
  for (int x = 0; x < g.n(); ++x)
    for (int a : g.r_fiber[g.rng[x]]) op.a(x, g.mul(g.inv[a], x)) += f[a] * mg.h.lam[a];
  return op;
}

LinOp rho_rep(SpaceStore& store, const MeasuredGroupoid& mg, const Vec& f) {
  const Groupoid& g = mg.g;
  LinOp op(store.l2(), store.l2());
  for (int x = 0; x < g.n(); ++x)
    for (int a : g.r_fiber[g.src[x]]) op.a(x, g.mul(x, a)) += f[a] * mg.h.lam[a];
  return op;
}

LinOp that_of(SpaceStore& store, const MeasuredGroupoid& mg, const Vec& f) {
  const Groupoid& g = mg.g;
  Vec values(g.n());
  for (int x = 0; x < g.n(); ++x) values[x] = f[g.unit_arrow[g.rng[x]]];
  return diag_mult(store.l2(), values);
}

}  // namespace mqg
