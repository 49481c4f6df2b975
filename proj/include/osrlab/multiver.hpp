#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "osrlab/interp.hpp"
#include "osrlab/osr.hpp"

namespace osrlab {

/// Program versions connected by transition tables; execution starts in
/// version 1 and may cross any labeled edge whose table maps the current
/// point.
struct MultiProgram {
  std::vector<Program> versions;  // index 0 = version 1
  std::map<std::pair<int, int>, OsrMapping> labels;

  const Program& version(int index) const { return versions.at(static_cast<size_t>(index - 1)); }
  int version_count() const { return static_cast<int>(versions.size()); }
  bool has_edge(int from, int to) const { return labels.count({from, to}) != 0; }
  const OsrMapping& label(int from, int to) const { return labels.at({from, to}); }

  /// Versions reachable by a transition from this state. The entry point is
  /// excluded: before the header executes, the transfer would discard the
  /// program's inputs.
  std::vector<int> applicable_targets(int version, int point) const;
};

/// Base plus one derived version per pipeline, with forward and backward
/// edges labeled by the pipeline's composed tables (star shape).
MultiProgram build_multiprogram(const Program& base,
                                const std::vector<std::vector<PipelineItem>>& pipelines,
                                ReconstructMode mode = ReconstructMode::Live);

struct MvState {
  int version = 1;
  Store store;
  int point = 1;
  bool operator==(const MvState& o) const {
    return version == o.version && point == o.point && store == o.store;
  }
};

struct Norm {};
struct Osr {
  int target_version = 0;
};
using OracleDecision = std::variant<Norm, Osr>;

class InapplicableDecision : public std::runtime_error {
 public:
  explicit InapplicableDecision(std::string msg) : std::runtime_error(std::move(msg)) {}
};

/// One transition: Norm steps inside the current version, Osr executes the
/// edge's compensation code on the store (restricted to its in list) and
/// lands at the mapped point. Terminal failures surface as outcomes.
using MvStepResult = std::variant<MvState, RunOutcome>;
MvStepResult mv_step(const MultiProgram& mp, const MvState& s, const OracleDecision& d);

struct TransitionRecord {
  std::int64_t step = 0;
  int from_version = 0;
  int to_version = 0;
  int point = 0;
};

OrderedJson transition_json(const TransitionRecord& record);

struct MvRunResult {
  RunOutcome outcome = FuelExhausted{0};
  std::vector<TransitionRecord> history;
  std::int64_t steps = 0;
};

/// Deterministic decision procedure choosing Norm or a transition at each
/// step; fixed (kind, seed) yields a reproducible stream.
class OraclePolicy {
 public:
  static OraclePolicy never();
  static OraclePolicy always_at(int point, int target_version);
  static OraclePolicy random(double probability, std::uint64_t seed);
  static OraclePolicy scripted(std::vector<std::pair<std::int64_t, int>> firings);

  /// "never" | "always@POINT>VERSION" | "random:PROB" (seed supplied
  /// separately) | "script:STEP>VERSION,STEP>VERSION,..."
  static OraclePolicy parse(const std::string& text, std::uint64_t seed);

  OracleDecision decide(const MvState& s, const std::vector<int>& options, std::int64_t step);
  std::string describe() const;

 private:
  enum class Kind { Never, AlwaysAt, Random, Scripted };
  Kind kind_ = Kind::Never;
  int point_ = 0;
  int target_ = 0;
  double probability_ = 0.0;
  std::vector<std::pair<std::int64_t, int>> firings_;
  std::mt19937_64 rng_;
};

MvRunResult mv_run(const MultiProgram& mp, const Store& store, OraclePolicy policy,
                   std::int64_t fuel);

// -- determinism checking ----------------------------------------------------

struct Deterministic {
  RunOutcome outcome;  // shared by every schedule; Completed carries the store
  std::int64_t runs_explored = 0;
};
struct Counterexample {
  std::vector<TransitionRecord> first_history;
  std::vector<TransitionRecord> second_history;
  std::string first_outcome;
  std::string second_outcome;
};
struct BudgetExceeded {
  std::int64_t runs_explored = 0;
  std::int64_t truncated_runs = 0;
};
using DeterminismVerdict = std::variant<Deterministic, Counterexample, BudgetExceeded>;

std::string verdict_str(const DeterminismVerdict& verdict);

/// Exhaustively enumerate every decision sequence with at most max_osr
/// transitions within the fuel bound; Deterministic iff every run ends in
/// the same completed store (or all share a failure class).
DeterminismVerdict determinism_check(const MultiProgram& mp, const Store& store,
                                     std::int64_t fuel, int max_osr,
                                     std::int64_t max_runs = 2'000'000);

}  // namespace osrlab
