#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mqg {

/// One verified identity: name, worst residual seen, pass/fail at the
/// tolerance it was checked with.
struct Check {
  std::string name;
  double residual = 0.0;
  bool pass = true;
  std::string detail;
};

struct Stage {
  std::string name;
  std::vector<Check> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct Report {
  std::vector<Stage> stages;

  Stage& stage(const std::string& name) {
    for (auto& s : stages)
      if (s.name == name) return s;
    stages.push_back({name, {}});
    return stages.back();
  }

  void add(const std::string& stage_name, Check c) {
    stage(stage_name).checks.push_back(std::move(c));
  }

  void add(const std::string& stage_name, const std::string& check_name,
           double residual, double tol, std::string detail = "") {
    add(stage_name, Check{check_name, residual, residual <= tol, std::move(detail)});
  }

  bool pass() const {
    for (const auto& s : stages)
      if (!s.pass()) return false;
    return true;
  }

  double worst() const {
    double r = 0.0;
    for (const auto& s : stages)
      for (const auto& c : s.checks) r = std::max(r, c.residual);
    return r;
  }
};

}  // namespace mqg
