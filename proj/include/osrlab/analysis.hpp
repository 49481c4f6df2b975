#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "osrlab/cfg.hpp"
#include "osrlab/program.hpp"

namespace osrlab {

/// Per-program dataflow results: backward may-liveness, forward definite
/// assignment, and reaching definitions (the `in` instruction defines its
/// listed variables at point 1).
class Dataflow {
 public:
  explicit Dataflow(const Program& p);

  const Program& program() const { return program_; }
  const Cfg& cfg() const { return cfg_; }

  /// Live = may-be-used-before-redefinition AND definitely assigned on all
  /// entry paths. Empty at point 1: nothing is assigned before `in` runs.
  const std::set<std::string>& live(int point) const {
    return live_[static_cast<size_t>(point)];
  }

  const std::set<std::string>& def_assigned(int point) const {
    return def_assigned_[static_cast<size_t>(point)];
  }

  /// Defining points of x that reach `point` (strictly before it).
  std::set<int> reaching_defs(int point, const std::string& x) const;

  /// The single definition of x reaching `point`, when x is definitely
  /// assigned and exactly one definition reaches.
  std::optional<int> unique_reaching_def(int point, const std::string& x) const;

 private:
  Program program_;
  Cfg cfg_;
  std::vector<std::set<std::string>> live_;
  std::vector<std::set<std::string>> def_assigned_;
  std::vector<std::map<std::string, std::set<int>>> reach_;
};

/// Shared, memoized analysis for a program (keyed by its canonical text).
std::shared_ptr<const Dataflow> analyze(const Program& p);

std::set<std::string> live_vars(const Program& p, int point);
std::set<std::string> definitely_assigned(const Program& p, int point);
std::optional<int> unique_reaching_def(const Program& p, int point, const std::string& x);

}  // namespace osrlab
