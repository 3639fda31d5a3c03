#pragma once

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

#include "mqg/errors.hpp"

namespace mqg {

/// Finite groupoid with explicit composition table. Units and morphisms are
/// referred to by index; the identity arrow of each unit is inferred from
/// neutrality during validation. Composition gh is defined exactly when
/// src(g) == rng(h).
struct Groupoid {
  std::vector<std::string> unit_ids;
  std::vector<std::string> morph_ids;
  std::vector<int> src;         // morphism -> unit
  std::vector<int> rng;         // morphism -> unit
  std::vector<int> inv;         // morphism -> morphism
  Eigen::MatrixXi comp;         // comp(g,h) = gh, -1 when not composable
  std::vector<int> unit_arrow;  // unit -> identity morphism
  std::vector<int> unit_of;     // morphism -> unit when identity arrow, else -1

  std::vector<std::vector<int>> r_fiber;  // per unit: {g : rng(g)=u}
  std::vector<std::vector<int>> s_fiber;  // per unit: {g : src(g)=u}

  int n_units() const { return static_cast<int>(unit_ids.size()); }
  int n() const { return static_cast<int>(morph_ids.size()); }
  bool composable(int g, int h) const { return src[g] == rng[h]; }
  int mul(int g, int h) const { return comp(g, h); }
  const std::string& mname(int g) const { return morph_ids[g]; }
  const std::string& uname(int u) const { return unit_ids[u]; }

  int unit_index(const std::string& id) const;
  int morph_index(const std::string& id) const;

private:
  friend Groupoid validate_groupoid(struct GroupoidDesc desc);
  std::unordered_map<std::string, int> unit_lookup_;
  std::unordered_map<std::string, int> morph_lookup_;
};

/// Raw description as it comes from a file or a generator: ids plus explicit
/// composition and inverse tables.
struct GroupoidDesc {
  std::vector<std::string> units;
  std::vector<std::string> morphisms;
  std::vector<std::string> msrc;  // parallel to morphisms
  std::vector<std::string> mrng;
  std::vector<std::array<std::string, 3>> compose;  // [g, h, gh]
  std::vector<std::array<std::string, 2>> inverse;  // [g, g^{-1}]
};

/// Checks every category-with-inverses axiom on the table and returns the
/// validated structure. Throws ValidationError (MissingComposite,
/// AssocViolation, BadInverse, ParseError) naming the offending morphisms.
Groupoid validate_groupoid(GroupoidDesc desc);

}  // namespace mqg
