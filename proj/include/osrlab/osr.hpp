#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "osrlab/analysis.hpp"
#include "osrlab/program.hpp"
#include "osrlab/rewrite.hpp"

#include <json.hpp>

namespace osrlab {

using OrderedJson = nlohmann::ordered_json;

/// Which source-side values reconstruction may read.
///  - Live: only variables live at the transition source.
///  - Avail: additionally, dead-but-unclobbered variables whose unique
///    source definition matches the one demanded at the destination; using
///    them extends their liveness artificially (the keep set).
enum class ReconstructMode { Live, Avail };

const char* mode_name(ReconstructMode mode);

class ReconstructFailed : public std::runtime_error {
 public:
  explicit ReconstructFailed(std::string msg) : std::runtime_error(std::move(msg)) {}
};

/// Straight-line program executed during a transition: `in` spans the
/// source live set (plus any keep set), the body rebuilds destination-only
/// live variables, `out` spans the destination live set.
struct CompCode {
  Program code;

  int body_size() const { return code.size() - 2; }
  bool empty_body() const { return body_size() == 0; }
};

struct MappingEntry {
  int target = 0;
  CompCode comp;
};

/// Per-point transition table between two program versions.
struct OsrMapping {
  ReconstructMode mode = ReconstructMode::Live;
  std::map<int, MappingEntry> entries;
  std::map<int, std::set<std::string>> keep_sets;  // nonempty only in Avail mode

  bool maps(int point) const { return entries.count(point) != 0; }
};

/// Context consulted when deciding whether a dead source variable still
/// holds the destination-demanded value: operand renamings recorded during
/// rewriting count as aliases.
struct AliasFacts {
  std::vector<std::pair<Expr, Expr>> renames;  // old operand -> new operand

  static AliasFacts from_log(const ActionLog& log);
  /// e with every recorded old operand replaced by its new form.
  Expr normalize(const Expr& e) const;
};

/// Instruction sequence assigning x the value it would have held at
/// `dst_query` in dst, reading only the mode's pool at (src, src_point).
/// `visited` is shared across one build_comp invocation; `keep` collects
/// dead source variables the Avail pool committed to preserving.
std::vector<Instr> reconstruct(const std::string& x, const Dataflow& src, int src_point,
                               const Dataflow& dst, int dst_point, int dst_query,
                               ReconstructMode mode, std::set<int>& visited,
                               std::set<std::string>& keep, const AliasFacts& aliases = {});

struct BuildCompResult {
  CompCode comp;
  std::set<std::string> keep;
};

/// Compensation code for a transition src@l -> dst@l2, or nullopt when some
/// destination-live variable cannot be rebuilt.
std::optional<BuildCompResult> build_comp(const Program& src, int src_point, const Program& dst,
                                          int dst_point, ReconstructMode mode,
                                          const AliasFacts& aliases = {});

struct OsrTransResult {
  Program program;
  OsrMapping fwd;
  OsrMapping bwd;
  ActionLog log;
};

/// Apply one rewrite rule and build bidirectional transition tables over
/// the rule's point maps; points whose compensation is undefined are left
/// out. nullopt when the rule does not match.
std::optional<OsrTransResult> osr_trans(const Program& p, const RewriteRule& rule,
                                        ReconstructMode mode = ReconstructMode::Live);

/// Identity mapping of a program onto itself (empty compensation bodies).
OsrMapping identity_mapping(const Program& p, ReconstructMode mode = ReconstructMode::Live);

struct ComposeDiagnostic {
  int point = 0;
  std::string reason;
};

/// Entry-wise composition: l -> (l'', comp ∘ comp'). Entries whose target
/// is unmapped by the second table, or whose codes do not compose (keep
/// sets in Avail mode), are dropped with a diagnostic.
OsrMapping compose_mappings(const OsrMapping& first, const OsrMapping& second,
                            std::vector<ComposeDiagnostic>* diagnostics = nullptr);

struct DoPassesResult {
  Program program;
  OsrMapping fwd;
  OsrMapping bwd;
  std::vector<std::string> skipped;  // rules that never matched
};

/// Fold osr_trans over a pipeline, composing forward tables left to right
/// and backward tables right to left; non-matching rules are skipped.
DoPassesResult do_passes(const Program& p, const std::vector<PipelineItem>& pipeline,
                         ReconstructMode mode = ReconstructMode::Live);

// -- feasibility reporting ---------------------------------------------------

enum class PointClass { EmptyComp, FeasibleLive, FeasibleAvailOnly, Infeasible };

const char* point_class_name(PointClass c);

struct FeasibilityReport {
  std::map<int, PointClass> points;
  std::map<int, int> live_body_sizes;   // live-feasible points
  std::map<int, int> avail_body_sizes;  // avail-feasible points
  std::map<int, int> keep_sizes;        // avail-feasible points

  double fraction(PointClass c) const;
  double avg_body_size(ReconstructMode mode) const;
  int max_body_size(ReconstructMode mode) const;
  double avg_keep_size() const;
  int max_keep_size() const;

  OrderedJson to_json() const;
};

/// Classify every source point for a transition to dst under the identity
/// point correspondence (optionally another map).
FeasibilityReport feasibility_report(const Program& src, const Program& dst,
                                     const AliasFacts& aliases = {},
                                     const PointMap* correspondence = nullptr);

/// JSON dump of one mapping ("src_version"/"dst_version" name the versions).
OrderedJson mapping_json(const OsrMapping& mapping, int src_version, int dst_version);

}  // namespace osrlab
