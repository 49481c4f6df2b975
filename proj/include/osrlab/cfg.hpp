#pragma once

#include <vector>

#include "osrlab/program.hpp"

namespace osrlab {

/// Control flow graph over points [1,n]. The final `out` is a sink;
/// `abort` nodes have no successors either.
struct Cfg {
  int n = 0;
  std::vector<std::vector<int>> succ;  // succ[point], points 1..n (index 0 unused)
  std::vector<std::vector<int>> pred;

  const std::vector<int>& successors(int point) const { return succ[static_cast<size_t>(point)]; }
  const std::vector<int>& predecessors(int point) const { return pred[static_cast<size_t>(point)]; }
  bool is_sink(int point) const { return successors(point).empty(); }

  /// True iff the graph has no cycle.
  bool acyclic() const;

  /// Points from which some sink is reachable (every complete path finite).
  std::vector<bool> can_reach_sink() const;

  Cfg reversed() const;
};

Cfg build_cfg(const Program& p);

}  // namespace osrlab
