#include "mqg/groupoid.hpp"

#include <algorithm>

namespace mqg {

int Groupoid::unit_index(const std::string& id) const {
  auto it = unit_lookup_.find(id);
  return it == unit_lookup_.end() ? -1 : it->second;
}

int Groupoid::morph_index(const std::string& id) const {
  auto it = morph_lookup_.find(id);
  return it == morph_lookup_.end() ? -1 : it->second;
}

Groupoid validate_groupoid(GroupoidDesc desc) {
  using namespace errkind;
  Groupoid g;
  g.unit_ids = desc.units;
  g.morph_ids = desc.morphisms;
  const int nu = g.n_units();
  const int nm = g.n();
  if (nu == 0 || nm == 0)
    throw ValidationError(ParseError, "groupoid needs at least one unit and one morphism");

  for (int u = 0; u < nu; ++u) {
    if (g.unit_lookup_.count(g.unit_ids[u]))
      throw ValidationError(ParseError, "duplicate unit id '" + g.unit_ids[u] + "'");
    g.unit_lookup_[g.unit_ids[u]] = u;
  }
  for (int m = 0; m < nm; ++m) {
    if (g.morph_lookup_.count(g.morph_ids[m]))
      throw ValidationError(ParseError, "duplicate morphism id '" + g.morph_ids[m] + "'");
    g.morph_lookup_[g.morph_ids[m]] = m;
  }

  g.src.resize(nm);
  g.rng.resize(nm);
  for (int m = 0; m < nm; ++m) {
    int s = g.unit_index(desc.msrc[m]);
    int r = g.unit_index(desc.mrng[m]);
    if (s < 0 || r < 0)
      throw ValidationError(ParseError, "morphism '" + g.morph_ids[m] + "' has unknown src/rng");
    g.src[m] = s;
    g.rng[m] = r;
  }

  g.comp = Eigen::MatrixXi::Constant(nm, nm, -1);
  for (const auto& row : desc.compose) {
    int a = g.morph_index(row[0]), b = g.morph_index(row[1]), c = g.morph_index(row[2]);
    if (a < 0 || b < 0 || c < 0)
      throw ValidationError(ParseError, "compose entry refers to unknown morphism ('" + row[0] +
                                            "','" + row[1] + "','" + row[2] + "')");
    if (!g.composable(a, b))
      throw ValidationError(MissingComposite, "product '" + row[0] + "'*'" + row[1] +
                                                  "' listed but src/rng do not match");
    if (g.comp(a, b) != -1 && g.comp(a, b) != c)
      throw ValidationError(ParseError, "conflicting products for '" + row[0] + "'*'" + row[1] + "'");
    if (g.src[c] != g.src[b] || g.rng[c] != g.rng[a])
      throw ValidationError(MissingComposite, "product '" + row[2] + "' of '" + row[0] + "'*'" +
                                                  row[1] + "' has inconsistent src/rng");
    g.comp(a, b) = c;
  }
  for (int a = 0; a < nm; ++a)
    for (int b = 0; b < nm; ++b)
      if (g.composable(a, b) && g.comp(a, b) == -1)
        throw ValidationError(MissingComposite, "composable pair '" + g.mname(a) + "','" +
                                                    g.mname(b) + "' has no listed product");

  // associativity over all composable triples
  for (int a = 0; a < nm; ++a) {
    for (int b = 0; b < nm; ++b) {
      if (!g.composable(a, b)) continue;
      const int ab = g.comp(a, b);
      for (int c = 0; c < nm; ++c) {
        if (!g.composable(b, c)) continue;
        const int bc = g.comp(b, c);
        if (g.comp(ab, c) != g.comp(a, bc))
          throw ValidationError(AssocViolation, "('" + g.mname(a) + "','" + g.mname(b) + "','" +
                                                    g.mname(c) + "') associates inconsistently");
      }
    }
  }

  // identity arrows: inferred as the neutral element of each unit
  g.unit_arrow.assign(nu, -1);
  g.unit_of.assign(nm, -1);
  for (int e = 0; e < nm; ++e) {
    if (g.src[e] != g.rng[e]) continue;
    const int u = g.src[e];
    bool neutral = true;
    for (int h = 0; h < nm && neutral; ++h) {
      if (g.rng[h] == u && g.comp(e, h) != h) neutral = false;
      if (g.src[h] == u && g.comp(h, e) != h) neutral = false;
    }
    if (neutral) {
      if (g.unit_arrow[u] != -1)
        throw ValidationError(ParseError, "unit '" + g.uname(u) + "' has two neutral arrows");
      g.unit_arrow[u] = e;
      g.unit_of[e] = u;
    }
  }
  for (int u = 0; u < nu; ++u)
    if (g.unit_arrow[u] == -1)
      throw ValidationError(MissingComposite, "unit '" + g.uname(u) + "' has no neutral arrow");

  // inverses
  g.inv.assign(nm, -1);
  for (const auto& row : desc.inverse) {
    int a = g.morph_index(row[0]), b = g.morph_index(row[1]);
    if (a < 0 || b < 0)
      throw ValidationError(ParseError, "inverse entry refers to unknown morphism");
    if (g.inv[a] != -1 && g.inv[a] != b)
      throw ValidationError(BadInverse, "morphism '" + row[0] + "' has two inverses listed");
    g.inv[a] = b;
    if (g.inv[b] != -1 && g.inv[b] != a)
      throw ValidationError(BadInverse, "morphism '" + row[1] + "' has two inverses listed");
    g.inv[b] = a;
  }
  for (int a = 0; a < nm; ++a) {
    if (g.inv[a] == -1)
      throw ValidationError(BadInverse, "morphism '" + g.mname(a) + "' has no inverse listed");
    const int b = g.inv[a];
    if (g.inv[b] != a)
      throw ValidationError(BadInverse, "inverse of '" + g.mname(a) + "' is not involutive");
    if (g.src[b] != g.rng[a] || g.rng[b] != g.src[a])
      throw ValidationError(BadInverse, "inverse of '" + g.mname(a) + "' has wrong src/rng");
    if (g.comp(a, b) != g.unit_arrow[g.rng[a]] || g.comp(b, a) != g.unit_arrow[g.src[a]])
      throw ValidationError(BadInverse, "'" + g.mname(a) + "' composed with its inverse is not a unit arrow");
  }

  g.r_fiber.assign(nu, {});
  g.s_fiber.assign(nu, {});
  for (int m = 0; m < nm; ++m) {
    g.r_fiber[g.rng[m]].push_back(m);
    g.s_fiber[g.src[m]].push_back(m);
  }
  return g;
}

}  // namespace mqg
