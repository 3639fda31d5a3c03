#include "mqg/matched_pair.hpp"

#include <algorithm>
#include <cmath>

namespace mqg {

namespace {

using namespace errkind;

HaarSystem haar_from_triples(const Groupoid& g,
                             const std::vector<std::pair<std::string, std::string>>& nu,
                             const std::vector<std::tuple<std::string, std::string, std::string>>& haar) {
  HaarSystem h;
  h.nu = Eigen::VectorXd::Zero(g.n_units());
  h.lam = Eigen::VectorXd::Zero(g.n());
  for (const auto& [uid, w] : nu) {
    const int u = g.unit_index(uid);
    if (u < 0) throw ValidationError(ParseError, "nu refers to unknown unit '" + uid + "'");
    h.nu[u] = parse_weight(w);
  }
  std::vector<char> seen(g.n(), 0);
  for (const auto& [uid, mid, w] : haar) {
    const int u = g.unit_index(uid);
    const int m = g.morph_index(mid);
    if (u < 0 || m < 0)
      throw ValidationError(ParseError, "haar entry refers to unknown unit or morphism");
    if (g.rng[m] != u)
      throw ValidationError(SupportMismatch, "weight for '" + mid + "' listed under unit '" + uid +
                                                 "' but its range differs");
    if (seen[m]) throw ValidationError(ParseError, "duplicate haar weight for '" + mid + "'");
    seen[m] = 1;
    h.lam[m] = parse_weight(w);
  }
  for (int m = 0; m < g.n(); ++m)
    if (!seen[m])
      throw ValidationError(SupportMismatch, "no haar weight for morphism '" + g.mname(m) + "'");
  return h;
}

Eigen::VectorXd sub_haar_from_triples(
    const Groupoid& g, const std::vector<char>& membership, int which,
    const std::vector<std::tuple<std::string, std::string, std::string>>& haar) {
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(g.n());
  std::vector<char> seen(g.n(), 0);
  const std::string tag = "haar" + std::to_string(which);
  for (const auto& [uid, mid, w] : haar) {
    const int u = g.unit_index(uid);
    const int m = g.morph_index(mid);
    if (u < 0 || m < 0)
      throw ValidationError(ParseError, tag + " entry refers to unknown unit or morphism");
    if (!membership[m])
      throw ValidationError(SupportMismatch,
                            tag + " puts weight on '" + mid + "' outside the subgroupoid");
    if (g.rng[m] != u)
      throw ValidationError(SupportMismatch, tag + " lists '" + mid + "' under the wrong unit");
    if (seen[m]) throw ValidationError(ParseError, tag + " has duplicate weight for '" + mid + "'");
    seen[m] = 1;
    lam[m] = parse_weight(w);
  }
  for (int m = 0; m < g.n(); ++m)
    if (membership[m] && !seen[m])
      throw ValidationError(SupportMismatch, tag + " misses morphism '" + g.mname(m) + "'");
  return lam;
}

void check_subgroupoid(const Groupoid& g, const std::vector<char>& in, int which) {
  const std::string tag = "G" + std::to_string(which);
  for (int u = 0; u < g.n_units(); ++u)
    if (!in[g.unit_arrow[u]])
      throw ValidationError(SubgroupoidNotClosed,
                            tag + " misses the unit arrow of '" + g.uname(u) + "'");
  for (int a = 0; a < g.n(); ++a) {
    if (!in[a]) continue;
    if (!in[g.inv[a]])
      throw ValidationError(SubgroupoidNotClosed,
                            tag + " is not closed under inverse at '" + g.mname(a) + "'");
    for (int b = 0; b < g.n(); ++b)
      if (in[b] && g.composable(a, b) && !in[g.mul(a, b)])
        throw ValidationError(SubgroupoidNotClosed, tag + " is not closed under composition at '" +
                                                        g.mname(a) + "'*'" + g.mname(b) + "'");
  }
}

void check_sub_haar(const Groupoid& g, const std::vector<char>& in, const Eigen::VectorXd& lam,
                    int which, double tol) {
  for (int m = 0; m < g.n(); ++m) {
    if (!in[m]) continue;
    if (!(lam[m] > 0.0))
      throw ValidationError(HaarFail, "haar" + std::to_string(which) + " weight of '" +
                                          g.mname(m) + "' is not positive");
  }
  for (int a = 0; a < g.n(); ++a) {
    if (!in[a]) continue;
    for (int t : g.r_fiber[g.src[a]]) {
      if (!in[t]) continue;
      const int at = g.mul(a, t);
      const double res = std::abs(lam[at] - lam[t]) / lam[t];
      if (res > tol)
        throw ValidationError(HaarFail, "haar" + std::to_string(which) +
                                            " is not left invariant at '" + g.mname(a) + "'*'" +
                                            g.mname(t) + "'");
    }
  }
}

Eigen::VectorXd sub_delta(const Groupoid& g, const std::vector<char>& in,
                          const Eigen::VectorXd& mu) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(g.n());
  for (int m = 0; m < g.n(); ++m)
    if (in[m]) d[m] = mu[g.inv[m]] / mu[m];
  return d;
}

}  // namespace

FiberContext MatchedPair::fiber() const {
  FiberContext ctx = fiber_context(amb);
  ctx.mid = mid;
  ctx.midhat = midhat;
  return ctx;
}

MatchedPair make_matched_pair(MeasuredGroupoid amb, std::vector<char> in1, std::vector<char> in2,
                              Eigen::VectorXd lam1, Eigen::VectorXd lam2, double tol) {
  const Groupoid& g = amb.g;
  const int n = g.n();

  check_subgroupoid(g, in1, 1);
  check_subgroupoid(g, in2, 2);
  for (int m = 0; m < n; ++m)
    if (in1[m] && in2[m] && g.unit_of[m] < 0)
      throw ValidationError(IntersectionTooLarge,
                            "'" + g.mname(m) + "' lies in both subgroupoids but is not a unit arrow");

  check_sub_haar(g, in1, lam1, 1, tol);
  check_sub_haar(g, in2, lam2, 2, tol);

  MatchedPair mp;
  mp.amb = std::move(amb);
  mp.in1 = std::move(in1);
  mp.in2 = std::move(in2);
  mp.lam1 = std::move(lam1);
  mp.lam2 = std::move(lam2);

  const Groupoid& gg = mp.amb.g;
  for (int m = 0; m < n; ++m) {
    if (mp.in1[m]) mp.elems1.push_back(m);
    if (mp.in2[m]) mp.elems2.push_back(m);
  }
  mp.mu1 = Eigen::VectorXd::Zero(n);
  mp.mu2 = Eigen::VectorXd::Zero(n);
  for (int m = 0; m < n; ++m) {
    if (mp.in1[m]) mp.mu1[m] = mp.amb.h.nu[gg.rng[m]] * mp.lam1[m];
    if (mp.in2[m]) mp.mu2[m] = mp.amb.h.nu[gg.rng[m]] * mp.lam2[m];
  }
  mp.delta1 = sub_delta(gg, mp.in1, mp.mu1);
  mp.delta2 = sub_delta(gg, mp.in2, mp.mu2);

  // factorization by exhaustive product search, uniqueness certified
  mp.p1.assign(n, -1);
  mp.p2.assign(n, -1);
  mp.p1p.assign(n, -1);
  mp.p2p.assign(n, -1);
  for (int a : mp.elems1)
    for (int b : mp.elems2) {
      if (gg.composable(a, b)) {
        const int gidx = gg.mul(a, b);
        if (mp.p1[gidx] != -1 && (mp.p1[gidx] != a || mp.p2[gidx] != b))
          throw ValidationError(NotFactorizable,
                                "'" + gg.mname(gidx) + "' has two distinct G1*G2 factorizations");
        mp.p1[gidx] = a;
        mp.p2[gidx] = b;
      }
      if (gg.composable(b, a)) {
        const int gidx = gg.mul(b, a);
        if (mp.p2p[gidx] != -1 && (mp.p2p[gidx] != b || mp.p1p[gidx] != a))
          throw ValidationError(NotFactorizable,
                                "'" + gg.mname(gidx) + "' has two distinct G2*G1 factorizations");
        mp.p2p[gidx] = b;
        mp.p1p[gidx] = a;
      }
    }
  for (int m = 0; m < n; ++m) {
    if (mp.p1[m] < 0)
      throw ValidationError(NotFactorizable, "'" + gg.mname(m) + "' is not a G1*G2 product");
    if (mp.p1p[m] < 0)
      throw ValidationError(NotFactorizable, "'" + gg.mname(m) + "' is not a G2*G1 product");
  }

  mp.mid.resize(n);
  mp.midhat.resize(n);
  for (int m = 0; m < n; ++m) {
    mp.mid[m] = gg.src[mp.p1[m]];
    if (mp.mid[m] != gg.rng[mp.p2[m]])
      throw ValidationError(NotFactorizable, "middle map inconsistent at '" + gg.mname(m) + "'");
    mp.midhat[m] = gg.src[mp.p2p[m]];
    if (mp.midhat[m] != gg.rng[mp.p1p[m]])
      throw ValidationError(NotFactorizable, "cofactor middle map inconsistent at '" + gg.mname(m) + "'");
  }
  return mp;
}

MatchedPair validate_matched_pair(const MatchedPairDesc& desc, double tol) {
  Groupoid g = validate_groupoid(desc.groupoid);
  HaarSystem h = haar_from_triples(g, desc.nu, desc.haar);
  MeasuredGroupoid mg = make_measured(std::move(g), std::move(h), tol);

  const int n = mg.g.n();
  std::vector<char> in1(n, 0), in2(n, 0);
  for (const auto& id : desc.g1) {
    const int m = mg.g.morph_index(id);
    if (m < 0) throw ValidationError(ParseError, "G1 refers to unknown morphism '" + id + "'");
    in1[m] = 1;
  }
  for (const auto& id : desc.g2) {
    const int m = mg.g.morph_index(id);
    if (m < 0) throw ValidationError(ParseError, "G2 refers to unknown morphism '" + id + "'");
    in2[m] = 1;
  }
  Eigen::VectorXd lam1 = sub_haar_from_triples(mg.g, in1, 1, desc.haar1);
  Eigen::VectorXd lam2 = sub_haar_from_triples(mg.g, in2, 2, desc.haar2);
  return make_matched_pair(std::move(mg), std::move(in1), std::move(in2), std::move(lam1),
                           std::move(lam2), tol);
}

MatchedPair degenerate_pair_units_first(const MeasuredGroupoid& mg, double tol) {
  const int n = mg.g.n();
  std::vector<char> in1(n, 0), in2(n, 1);
  Eigen::VectorXd lam1 = Eigen::VectorXd::Zero(n);
  for (int u = 0; u < mg.g.n_units(); ++u) {
    in1[mg.g.unit_arrow[u]] = 1;
    lam1[mg.g.unit_arrow[u]] = 1.0;
  }
  return make_matched_pair(mg, std::move(in1), std::move(in2), std::move(lam1), mg.h.lam, tol);
}

MatchedPair degenerate_pair_units_second(const MeasuredGroupoid& mg, double tol) {
  const int n = mg.g.n();
  std::vector<char> in1(n, 1), in2(n, 0);
  Eigen::VectorXd lam2 = Eigen::VectorXd::Zero(n);
  for (int u = 0; u < mg.g.n_units(); ++u) {
    in2[mg.g.unit_arrow[u]] = 1;
    lam2[mg.g.unit_arrow[u]] = 1.0;
  }
  return make_matched_pair(mg, std::move(in1), std::move(in2), mg.h.lam, std::move(lam2), tol);
}

DecompositionReport check_haar_decomposition(const MatchedPair& mp) {
  const Groupoid& g = mp.amb.g;
  DecompositionReport rep;
  for (int t = 0; t < g.n(); ++t) {
    const double lhs = mp.amb.h.lam[t];
    const int a = mp.p1[t], b = mp.p2[t];
    const double rhs1 = mp.lam1[a] * mp.lam2[b] * mp.amb.mod.delta[b] / mp.delta2[b];
    const double r1 = std::abs(lhs - rhs1) / lhs;
    if (r1 > rep.residual1) {
      rep.residual1 = r1;
      rep.worst1 = g.mname(t);
    }
    const int bp = mp.p2p[t], ap = mp.p1p[t];
    const double rhs2 = mp.lam2[bp] * mp.lam1[ap] * mp.amb.mod.delta[ap] / mp.delta1[ap];
    const double r2 = std::abs(lhs - rhs2) / lhs;
    if (r2 > rep.residual2) {
      rep.residual2 = r2;
      rep.worst2 = g.mname(t);
    }
  }
  return rep;
}

namespace {

// Density of the product-pullback measure against the fibered product of the
// subgroupoid measures, evaluated on pairs with a common source; returns the
// per-unit value, certifying fiber constancy.
Eigen::VectorXd pullback_density(const MatchedPair& mp, bool swap_roles, double tol,
                                 double* residual_out) {
  const Groupoid& g = mp.amb.g;
  const auto& inA = swap_roles ? mp.in2 : mp.in1;
  const auto& inB = swap_roles ? mp.in1 : mp.in2;
  const auto& lamA = swap_roles ? mp.lam2 : mp.lam1;
  const auto& lamB = swap_roles ? mp.lam1 : mp.lam2;
  const auto& deltaA = swap_roles ? mp.delta2 : mp.delta1;
  const auto& deltaB = swap_roles ? mp.delta1 : mp.delta2;

  Eigen::VectorXd k = Eigen::VectorXd::Zero(g.n_units());
  std::vector<char> seen(g.n_units(), 0);
  double worst = 0.0;
  for (int a = 0; a < g.n(); ++a) {
    if (!inA[a]) continue;
    for (int b = 0; b < g.n(); ++b) {
      if (!inB[b] || g.src[a] != g.src[b]) continue;
      const int u = g.src[a];
      const int prod = g.mul(a, g.inv[b]);  // theta(a, b) = a b^{-1}
      const double num = mp.amb.mod.delta[b] * mp.amb.h.lam[prod] * mp.amb.h.nu[g.rng[a]];
      const double den =
          deltaA[a] * deltaB[b] * lamA[g.inv[a]] * lamB[g.inv[b]] * mp.amb.h.nu[u];
      const double h = num / den;
      if (!seen[u]) {
        seen[u] = 1;
        k[u] = h;
      } else {
        worst = std::max(worst, std::abs(h - k[u]) / std::abs(k[u]));
      }
    }
  }
  if (residual_out) *residual_out = worst;
  if (worst > tol)
    throw ValidationError(errkind::NotFiberConstant,
                          "pullback density varies within a common-source fiber (residual " +
                              std::to_string(worst) + "); the measures do not form a measured matched pair");
  for (int u = 0; u < g.n_units(); ++u)
    if (!seen[u]) k[u] = 1.0;
  return k;
}

}  // namespace

NormalizationResult solve_haar_normalization(const MatchedPair& mp, double tol) {
  NormalizationResult res;
  double r1 = 0.0, r2 = 0.0;
  res.k1 = pullback_density(mp, false, tol, &r1);
  res.k2 = pullback_density(mp, true, tol, &r2);
  res.fiber_constancy_residual = std::max(r1, r2);
  return res;
}

MatchedPair apply_normalization(const MatchedPair& mp, const Eigen::VectorXd& k1,
                                const Eigen::VectorXd& k2, double tol) {
  const Groupoid& g = mp.amb.g;
  Eigen::VectorXd lam1 = mp.lam1, lam2 = mp.lam2;
  for (int m = 0; m < g.n(); ++m) {
    if (mp.in1[m]) lam1[m] *= k1[g.src[m]];
    if (mp.in2[m]) lam2[m] *= k2[g.src[m]];
  }
  return make_matched_pair(mp.amb, mp.in1, mp.in2, std::move(lam1), std::move(lam2), tol);
}

Report verify_mutual_actions(const MatchedPair& mp, double tol) {
  const Groupoid& g = mp.amb.g;
  Report rep;
  const char* st = "mutual_actions";

  double base_maps = 0.0;
  for (int m = 0; m < g.n(); ++m) {
    base_maps += (g.src[mp.p2[m]] != g.src[m]);
    base_maps += (g.rng[mp.p1[m]] != g.rng[m]);
    base_maps += (g.rng[mp.p2p[m]] != g.rng[m]);
    base_maps += (g.src[mp.p1p[m]] != g.src[m]);
    base_maps += (mp.mid[m] != g.src[mp.p1[m]] || mp.mid[m] != g.rng[mp.p2[m]]);
    base_maps += (mp.midhat[m] != g.src[mp.p2p[m]] || mp.midhat[m] != g.rng[mp.p1p[m]]);
    base_maps += (g.mul(mp.p1[m], mp.p2[m]) != m);
    base_maps += (g.mul(mp.p2p[m], mp.p1p[m]) != m);
  }
  rep.add(st, "factorization_base_maps", base_maps, tol);

  // unit arrows factor trivially
  double units_triv = 0.0;
  for (int u = 0; u < g.n_units(); ++u) {
    const int e = g.unit_arrow[u];
    units_triv += (mp.p1[e] != e || mp.p2[e] != e || mp.p1p[e] != e || mp.p2p[e] != e);
  }
  rep.add(st, "unit_factorization", units_triv, tol);

  // coaction law: p2(p2(g2 g1) h1) == p2(g2 g1 h1)
  double coact = 0.0;
  for (int g2 : mp.elems2)
    for (int g1 : mp.elems1) {
      if (!g.composable(g2, g1)) continue;
      const int x = g.mul(g2, g1);
      for (int h1 : mp.elems1) {
        if (!g.composable(g1, h1)) continue;
        coact += (mp.p2[g.mul(mp.p2[x], h1)] != mp.p2[g.mul(x, h1)]);
      }
    }
  rep.add(st, "coaction_associativity", coact, tol);

  // mirrored law for ahat: p1(g2 p1(g2' g1)) ... expressed through cofactors:
  // p1(h2 p1(g)) == p1(h2 g) for h2 in G2
  double coact_hat = 0.0;
  for (int h2 : mp.elems2)
    for (int m = 0; m < g.n(); ++m) {
      if (!g.composable(h2, m)) continue;
      coact_hat += (mp.p1[g.mul(h2, mp.p1[m])] != mp.p1[g.mul(h2, m)]);
    }
  rep.add(st, "coaction_associativity_mirrored", coact_hat, tol);

  // factorization compatibility consumed by the co-involution:
  // p2(phihat(g)) == p2(g)^{-1} with phi(g) = p1(g)^{-1} p2p(g)
  double phicomp = 0.0;
  for (int m = 0; m < g.n(); ++m) {
    const int phi = g.mul(g.inv[mp.p1[m]], mp.p2p[m]);
    const int phihat = g.inv[phi];
    phicomp += (mp.p2[phihat] != g.inv[mp.p2[m]]);
    phicomp += (mp.p1[phihat] != mp.p1p[m]);
  }
  rep.add(st, "cofactor_compatibility", phicomp, tol);

  // swap symmetry: (G2, G1) validates as a matched pair
  double swap_ok = 0.0;
  try {
    (void)make_matched_pair(mp.amb, mp.in2, mp.in1, mp.lam2, mp.lam1, tol);
  } catch (const ValidationError&) {
    swap_ok = 1.0;
  }
  rep.add(st, "swap_symmetry", swap_ok, tol);
  return rep;
}

const TupleSpace* crossed_kernel_space(SpaceStore& store, const MatchedPair& mp) {
  return store.custom(2, {Constraint{0, BaseMap::S, 1, BaseMap::R}},
                      {LegDef{&mp.mu2, &mp.in2}, LegDef{&mp.mu1, &mp.in1}});
}

const TupleSpace* cokernel_space(SpaceStore& store, const MatchedPair& mp) {
  return store.custom(2, {Constraint{0, BaseMap::R, 1, BaseMap::S}},
                      {LegDef{&mp.mu1, &mp.in1}, LegDef{&mp.mu2, &mp.in2}});
}

Vec mutual_action_a(const MatchedPair& mp, const TupleSpace* ker, const Vec& f) {
  const Groupoid& g = mp.amb.g;
  Vec out(ker->size());
  for (int i = 0; i < ker->size(); ++i) {
    const auto& t = ker->tup[i];
    out[i] = f[mp.p2[g.mul(t[0], t[1])]];
  }
  return out;
}

Vec mutual_action_ahat(const MatchedPair& mp, const TupleSpace* ker_hat, const Vec& h) {
  const Groupoid& g = mp.amb.g;
  Vec out(ker_hat->size());
  for (int i = 0; i < ker_hat->size(); ++i) {
    const auto& t = ker_hat->tup[i];
    out[i] = h[mp.p1[g.mul(t[1], t[0])]];
  }
  return out;
}

LinOp iso_u(SpaceStore& store, const MatchedPair& mp) {
  const Groupoid& g = mp.amb.g;
  const TupleSpace* ker = crossed_kernel_space(store, mp);
  LinOp u(store.l2(), ker);
  for (int i = 0; i < ker->size(); ++i) {
    const auto& t = ker->tup[i];
    const int prod = g.mul(t[0], t[1]);
    u.a(i, prod) = std::sqrt(mp.amb.mod.delta[t[1]] / mp.delta1[t[1]]);
  }
  return u;
}

}  // namespace mqg
