#include "osrlab/multiver.hpp"

#include <functional>
#include <sstream>

namespace osrlab {

std::vector<int> MultiProgram::applicable_targets(int version, int point) const {
  std::vector<int> out;
  if (point < 2 || point > this->version(version).size()) return out;
  for (const auto& [edge, mapping] : labels)
    if (edge.first == version && mapping.maps(point)) out.push_back(edge.second);
  return out;
}

MultiProgram build_multiprogram(const Program& base,
                                const std::vector<std::vector<PipelineItem>>& pipelines,
                                ReconstructMode mode) {
  MultiProgram mp;
  mp.versions.push_back(base);
  for (const auto& pipeline : pipelines) {
    auto derived = do_passes(base, pipeline, mode);
    mp.versions.push_back(derived.program);
    int index = mp.version_count();
    mp.labels.emplace(std::make_pair(1, index), std::move(derived.fwd));
    mp.labels.emplace(std::make_pair(index, 1), std::move(derived.bwd));
  }
  return mp;
}

MvStepResult mv_step(const MultiProgram& mp, const MvState& s, const OracleDecision& d) {
  const Program& current = mp.version(s.version);
  if (std::holds_alternative<Norm>(d)) {
    if (s.point < 1 || s.point > current.size())
      throw InapplicableDecision("no instruction at point " + std::to_string(s.point));
    auto result = step(current, ProgState{s.store, s.point});
    if (auto* outcome = std::get_if<RunOutcome>(&result)) return *outcome;
    const auto& next = std::get<ProgState>(result);
    return MvState{s.version, next.store, next.point};
  }

  int target = std::get<Osr>(d).target_version;
  if (!mp.has_edge(s.version, target))
    throw InapplicableDecision("no edge from version " + std::to_string(s.version) + " to " +
                               std::to_string(target));
  const OsrMapping& mapping = mp.label(s.version, target);
  auto entry = mapping.entries.find(s.point);
  if (entry == mapping.entries.end())
    throw InapplicableDecision("point " + std::to_string(s.point) +
                               " is not mapped toward version " + std::to_string(target));
  const CompCode& comp = entry->second.comp;
  std::set<std::string> ins(comp.code.in_vars().begin(), comp.code.in_vars().end());
  auto outcome = run(comp.code, s.store.restricted(ins), comp.code.size() + 1);
  if (auto* completed = std::get_if<Completed>(&outcome))
    return MvState{target, completed->final, entry->second.target};
  return outcome;
}

OraclePolicy OraclePolicy::never() { return OraclePolicy{}; }

OraclePolicy OraclePolicy::always_at(int point, int target_version) {
  OraclePolicy p;
  p.kind_ = Kind::AlwaysAt;
  p.point_ = point;
  p.target_ = target_version;
  return p;
}

OraclePolicy OraclePolicy::random(double probability, std::uint64_t seed) {
  OraclePolicy p;
  p.kind_ = Kind::Random;
  p.probability_ = probability;
  p.rng_.seed(seed);
  return p;
}

OraclePolicy OraclePolicy::scripted(std::vector<std::pair<std::int64_t, int>> firings) {
  OraclePolicy p;
  p.kind_ = Kind::Scripted;
  p.firings_ = std::move(firings);
  return p;
}

OraclePolicy OraclePolicy::parse(const std::string& text, std::uint64_t seed) {
  if (text == "never") return never();
  if (text.rfind("always@", 0) == 0) {
    auto sep = text.find('>');
    if (sep == std::string::npos)
      throw std::invalid_argument("always policy needs POINT>VERSION");
    int point = std::stoi(text.substr(7, sep - 7));
    int target = std::stoi(text.substr(sep + 1));
    return always_at(point, target);
  }
  if (text.rfind("random:", 0) == 0) {
    double prob = std::stod(text.substr(7));
    if (prob < 0.0 || prob > 1.0) throw std::invalid_argument("probability outside [0,1]");
    return random(prob, seed);
  }
  if (text.rfind("script:", 0) == 0) {
    std::vector<std::pair<std::int64_t, int>> firings;
    std::istringstream items(text.substr(7));
    std::string item;
    while (std::getline(items, item, ',')) {
      auto sep = item.find('>');
      if (sep == std::string::npos) throw std::invalid_argument("script entries are STEP>VERSION");
      firings.emplace_back(std::stoll(item.substr(0, sep)), std::stoi(item.substr(sep + 1)));
    }
    return scripted(std::move(firings));
  }
  throw std::invalid_argument("unknown policy '" + text + "'");
}

OracleDecision OraclePolicy::decide(const MvState& s, const std::vector<int>& options,
                                    std::int64_t step) {
  if (options.empty()) return Norm{};
  switch (kind_) {
    case Kind::Never:
      return Norm{};
    case Kind::AlwaysAt:
      if (s.point == point_)
        for (int q : options)
          if (q == target_) return Osr{q};
      return Norm{};
    case Kind::Random: {
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      if (coin(rng_) >= probability_) return Norm{};
      std::uniform_int_distribution<size_t> pick(0, options.size() - 1);
      return Osr{options[pick(rng_)]};
    }
    case Kind::Scripted:
      for (const auto& [at, target] : firings_)
        if (at == step)
          for (int q : options)
            if (q == target) return Osr{q};
      return Norm{};
  }
  return Norm{};
}

std::string OraclePolicy::describe() const {
  switch (kind_) {
    case Kind::Never: return "never";
    case Kind::AlwaysAt:
      return "always@" + std::to_string(point_) + ">" + std::to_string(target_);
    case Kind::Random: return "random:" + std::to_string(probability_);
    case Kind::Scripted: return "script";
  }
  return "?";
}

OrderedJson transition_json(const TransitionRecord& record) {
  OrderedJson out;
  out["step"] = record.step;
  out["kind"] = "osr";
  out["from"] = record.from_version;
  out["to"] = record.to_version;
  out["point"] = record.point;
  return out;
}

MvRunResult mv_run(const MultiProgram& mp, const Store& store, OraclePolicy policy,
                   std::int64_t fuel) {
  MvRunResult result;
  MvState state{1, store, 1};
  for (std::int64_t used = 0; used < fuel; ++used) {
    if (state.point == mp.version(state.version).size() + 1) {
      result.outcome = Completed{state.store};
      result.steps = used;
      return result;
    }
    auto options = mp.applicable_targets(state.version, state.point);
    OracleDecision d = policy.decide(state, options, used);
    if (const auto* osr = std::get_if<Osr>(&d))
      result.history.push_back(TransitionRecord{used, state.version, osr->target_version,
                                                state.point});
    auto next = mv_step(mp, state, d);
    if (auto* outcome = std::get_if<RunOutcome>(&next)) {
      result.outcome = *outcome;
      result.steps = used + 1;
      return result;
    }
    state = std::move(std::get<MvState>(next));
  }
  if (state.point == mp.version(state.version).size() + 1) {
    result.outcome = Completed{state.store};
  } else {
    result.outcome = FuelExhausted{fuel};
  }
  result.steps = fuel;
  return result;
}

std::string verdict_str(const DeterminismVerdict& verdict) {
  if (const auto* d = std::get_if<Deterministic>(&verdict))
    return "Deterministic " + d->final.str() + " (" + std::to_string(d->runs_explored) + " runs)";
  if (const auto* c = std::get_if<Counterexample>(&verdict)) {
    std::string out = "Counterexample: " + c->first_outcome + " vs " + c->second_outcome;
    auto histories = {&c->first_history, &c->second_history};
    for (const auto* history : histories) {
      out += " [";
      for (const auto& record : *history)
        out += " " + std::to_string(record.from_version) + ">" +
               std::to_string(record.to_version) + "@" + std::to_string(record.point);
      out += " ]";
    }
    return out;
  }
  const auto& b = std::get<BudgetExceeded>(verdict);
  return "BudgetExceeded (" + std::to_string(b.runs_explored) + " runs, " +
         std::to_string(b.truncated_runs) + " truncated)";
}

DeterminismVerdict determinism_check(const MultiProgram& mp, const Store& store,
                                     std::int64_t fuel, int max_osr, std::int64_t max_runs) {
  struct RunRecord {
    RunOutcome outcome;
    std::vector<TransitionRecord> history;
  };
  std::optional<RunRecord> reference;
  std::optional<Counterexample> counterexample;
  std::int64_t runs = 0;
  std::int64_t truncated = 0;
  bool budget_tripped = false;
  std::vector<TransitionRecord> history;

  std::function<void(MvState, std::int64_t, int)> explore = [&](MvState state, std::int64_t used,
                                                                int osr_used) {
    if (counterexample || budget_tripped) return;

    auto finish = [&](RunOutcome outcome) {
      ++runs;
      if (runs > max_runs) {
        budget_tripped = true;
        return;
      }
      if (!reference) {
        reference = RunRecord{std::move(outcome), history};
        return;
      }
      bool matches = same_outcome_class(reference->outcome, outcome);
      if (matches && std::holds_alternative<Completed>(outcome))
        matches = std::get<Completed>(reference->outcome).final ==
                  std::get<Completed>(outcome).final;
      if (!matches)
        counterexample = Counterexample{reference->history, history,
                                        outcome_str(reference->outcome), outcome_str(outcome)};
    };

    if (state.point == mp.version(state.version).size() + 1) {
      finish(Completed{state.store});
      return;
    }
    if (used >= fuel) {
      ++truncated;
      ++runs;
      return;
    }

    // normal step
    {
      auto next = mv_step(mp, state, Norm{});
      if (auto* outcome = std::get_if<RunOutcome>(&next)) finish(*outcome);
      else explore(std::get<MvState>(next), used + 1, osr_used);
    }

    // transitions
    if (osr_used < max_osr) {
      for (int target : mp.applicable_targets(state.version, state.point)) {
        if (counterexample || budget_tripped) return;
        history.push_back(TransitionRecord{used, state.version, target, state.point});
        auto next = mv_step(mp, state, Osr{target});
        if (auto* outcome = std::get_if<RunOutcome>(&next)) finish(*outcome);
        else explore(std::get<MvState>(next), used + 1, osr_used + 1);
        history.pop_back();
      }
    }
  };
  explore(MvState{1, store, 1}, 0, 0);

  if (counterexample) return *counterexample;
  if (budget_tripped || truncated > 0) return BudgetExceeded{runs, truncated};
  if (reference && std::holds_alternative<Completed>(reference->outcome))
    return Deterministic{std::get<Completed>(reference->outcome).final, runs};
  // every schedule fails the same way; report the shared failure as the
  // deterministic (empty-store) answer only if a run exists
  if (reference) return Counterexample{reference->history, {}, outcome_str(reference->outcome),
                                       outcome_str(reference->outcome)};
  return BudgetExceeded{0, 0};
}

}  // namespace osrlab
