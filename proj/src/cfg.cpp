#include "osrlab/cfg.hpp"

#include <algorithm>
#include <functional>

namespace osrlab {

Cfg build_cfg(const Program& p) {
  const int n = p.size();
  Cfg g;
  g.n = n;
  g.succ.assign(static_cast<size_t>(n) + 1, {});
  g.pred.assign(static_cast<size_t>(n) + 1, {});

  auto add_edge = [&](int from, int to) {
    auto& s = g.succ[static_cast<size_t>(from)];
    if (std::find(s.begin(), s.end(), to) == s.end()) s.push_back(to);
  };

  for (int i = 1; i <= n; ++i) {
    const Instr& instr = p.at(i);
    bool is_abort = std::holds_alternative<Abort>(instr);
    bool is_goto = std::holds_alternative<Goto>(instr);
    if (!is_abort && !is_goto && i + 1 <= n) add_edge(i, i + 1);
    if (auto t = goto_target(instr)) add_edge(i, *t);
  }
  for (int i = 1; i <= n; ++i) {
    std::sort(g.succ[static_cast<size_t>(i)].begin(), g.succ[static_cast<size_t>(i)].end());
    for (int s : g.succ[static_cast<size_t>(i)]) g.pred[static_cast<size_t>(s)].push_back(i);
  }
  for (int i = 1; i <= n; ++i)
    std::sort(g.pred[static_cast<size_t>(i)].begin(), g.pred[static_cast<size_t>(i)].end());
  return g;
}

bool Cfg::acyclic() const {
  std::vector<int> state(static_cast<size_t>(n) + 1, 0);  // 0 new, 1 open, 2 done
  bool cycle = false;
  std::function<void(int)> visit = [&](int node) {
    state[static_cast<size_t>(node)] = 1;
    for (int s : successors(node)) {
      if (state[static_cast<size_t>(s)] == 1) cycle = true;
      else if (state[static_cast<size_t>(s)] == 0) visit(s);
      if (cycle) return;
    }
    state[static_cast<size_t>(node)] = 2;
  };
  for (int i = 1; i <= n && !cycle; ++i)
    if (state[static_cast<size_t>(i)] == 0) visit(i);
  return !cycle;
}

std::vector<bool> Cfg::can_reach_sink() const {
  std::vector<bool> reach(static_cast<size_t>(n) + 1, false);
  std::vector<int> work;
  for (int i = 1; i <= n; ++i)
    if (is_sink(i)) {
      reach[static_cast<size_t>(i)] = true;
      work.push_back(i);
    }
  while (!work.empty()) {
    int node = work.back();
    work.pop_back();
    for (int p : predecessors(node))
      if (!reach[static_cast<size_t>(p)]) {
        reach[static_cast<size_t>(p)] = true;
        work.push_back(p);
      }
  }
  return reach;
}

Cfg Cfg::reversed() const {
  Cfg r;
  r.n = n;
  r.succ = pred;
  r.pred = succ;
  return r;
}

}  // namespace osrlab
