#include "osrlab/analysis.hpp"

#include <mutex>
#include <unordered_map>

#include "osrlab/parse.hpp"

namespace osrlab {

namespace {

std::set<std::string> set_minus(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out;
  for (const auto& x : a)
    if (!b.count(x)) out.insert(x);
  return out;
}

}  // namespace

Dataflow::Dataflow(const Program& p) : program_(p), cfg_(build_cfg(p)) {
  const int n = p.size();
  const size_t sz = static_cast<size_t>(n) + 1;

  // backward may-liveness
  std::vector<std::set<std::string>> may_live(sz);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int l = n; l >= 1; --l) {
      std::set<std::string> out;
      for (int s : cfg_.successors(l)) {
        const auto& ls = may_live[static_cast<size_t>(s)];
        out.insert(ls.begin(), ls.end());
      }
      std::set<std::string> in = used_vars(p.at(l));
      auto defs = defined_vars(p.at(l));
      for (const auto& x : set_minus(out, defs)) in.insert(x);
      if (in != may_live[static_cast<size_t>(l)]) {
        may_live[static_cast<size_t>(l)] = std::move(in);
        changed = true;
      }
    }
  }

  // forward definite assignment (must); unreachable points get the universe
  auto all = p.all_vars();
  std::set<std::string> universe(all.begin(), all.end());
  def_assigned_.assign(sz, universe);
  def_assigned_[1].clear();
  changed = true;
  while (changed) {
    changed = false;
    for (int l = 2; l <= n; ++l) {
      bool first = true;
      std::set<std::string> in;
      for (int q : cfg_.predecessors(l)) {
        std::set<std::string> out = def_assigned_[static_cast<size_t>(q)];
        auto defs = defined_vars(p.at(q));
        out.insert(defs.begin(), defs.end());
        if (first) {
          in = std::move(out);
          first = false;
        } else {
          std::set<std::string> meet;
          for (const auto& x : in)
            if (out.count(x)) meet.insert(x);
          in = std::move(meet);
        }
      }
      if (first) in = universe;  // no predecessors
      if (in != def_assigned_[static_cast<size_t>(l)]) {
        def_assigned_[static_cast<size_t>(l)] = std::move(in);
        changed = true;
      }
    }
  }

  // reaching definitions (forward may)
  reach_.assign(sz, {});
  changed = true;
  while (changed) {
    changed = false;
    for (int l = 2; l <= n; ++l) {
      std::map<std::string, std::set<int>> in;
      for (int q : cfg_.predecessors(l)) {
        std::map<std::string, std::set<int>> out = reach_[static_cast<size_t>(q)];
        for (const auto& x : defined_vars(p.at(q))) out[x] = {q};
        for (auto& [x, defs] : out) in[x].insert(defs.begin(), defs.end());
      }
      if (in != reach_[static_cast<size_t>(l)]) {
        reach_[static_cast<size_t>(l)] = std::move(in);
        changed = true;
      }
    }
  }

  live_.assign(sz, {});
  for (int l = 2; l <= n; ++l) {
    const auto& da = def_assigned_[static_cast<size_t>(l)];
    for (const auto& x : may_live[static_cast<size_t>(l)])
      if (da.count(x)) live_[static_cast<size_t>(l)].insert(x);
  }
}

std::set<int> Dataflow::reaching_defs(int point, const std::string& x) const {
  const auto& at = reach_[static_cast<size_t>(point)];
  auto it = at.find(x);
  return it == at.end() ? std::set<int>{} : it->second;
}

std::optional<int> Dataflow::unique_reaching_def(int point, const std::string& x) const {
  auto defs = reaching_defs(point, x);
  if (defs.size() != 1) return std::nullopt;
  if (!def_assigned_[static_cast<size_t>(point)].count(x)) return std::nullopt;
  return *defs.begin();
}

std::shared_ptr<const Dataflow> analyze(const Program& p) {
  static std::mutex mutex;
  static std::unordered_map<std::string, std::shared_ptr<const Dataflow>> cache;
  std::string key = print_program(p);
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto df = std::make_shared<const Dataflow>(p);
  cache.emplace(std::move(key), df);
  return df;
}

std::set<std::string> live_vars(const Program& p, int point) { return analyze(p)->live(point); }

std::set<std::string> definitely_assigned(const Program& p, int point) {
  return analyze(p)->def_assigned(point);
}

std::optional<int> unique_reaching_def(const Program& p, int point, const std::string& x) {
  return analyze(p)->unique_reaching_def(point, x);
}

}  // namespace osrlab
