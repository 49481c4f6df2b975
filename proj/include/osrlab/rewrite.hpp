#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "osrlab/ctl.hpp"
#include "osrlab/pattern.hpp"
#include "osrlab/program.hpp"

namespace osrlab {

/// Multi-clause rewrite rule guarded by a side condition. Each clause
/// rewrites the instruction at one matched point; the side condition is a
/// point-independent formula whose anchors refer to the clause point
/// meta-variables.
struct RuleClause {
  std::string point_meta;
  InstrPat lhs;
  InstrPat rhs;
};

struct RewriteRule {
  std::string name;
  std::vector<RuleClause> clauses;
  CtlRef side;
};

RewriteRule builtin_cp();
RewriteRule builtin_dce();
RewriteRule builtin_hoist();

/// Rule by pipeline name: "cp", "dce", "hoist".
std::optional<RewriteRule> builtin_rule(const std::string& name);

// -- primitive edit actions --------------------------------------------------

struct AddInstr {
  Instr instr;
  int at = 0;  // inserts at this point; goto targets >= at shift up
};
/// Length-preserving deletion: the instruction becomes `skip`, so point
/// maps across versions stay the identity.
struct DeleteInstr {
  int at = 0;
};
struct HoistInstr {
  int from = 0;
  int to = 0;  // target point must hold `skip`
};
struct SinkInstr {
  int from = 0;
  int to = 0;
};
struct ReplaceOperand {
  int at = 0;
  Expr old_op;
  Expr new_op;
};
struct ReplaceAllUses {
  Expr old_op;
  Expr new_op;
};

using Action = std::variant<AddInstr, DeleteInstr, HoistInstr, SinkInstr, ReplaceOperand,
                            ReplaceAllUses>;
using ActionLog = std::vector<Action>;

std::string action_str(const Action& action);

class InvalidAction : public std::runtime_error {
 public:
  explicit InvalidAction(std::string msg) : std::runtime_error(std::move(msg)) {}
};

/// Replay a recorded log against the program it was recorded on.
Program replay_log(const Program& p, const ActionLog& log);

/// Insert `count` skips at the given point (targets relocate).
Program pad_program(const Program& p, int at, int count = 1);

// -- rule application --------------------------------------------------------

/// Partial map between points of two program versions.
using PointMap = std::map<int, int>;

PointMap identity_point_map(int size);
PointMap invert_point_map(const PointMap& map);

struct ApplyResult {
  Program program;
  PointMap fwd;  // base point -> derived point
  PointMap bwd;  // derived point -> base point
  ActionLog log;
  Substitution theta;
};

/// Apply the first matching substitution (deterministic order: clause
/// points ascending, then remaining bindings); nullopt when no
/// substitution satisfies both the patterns and the side condition.
std::optional<ApplyResult> apply_rule(const Program& p, const RewriteRule& rule);

/// All substitutions under which the rule's clauses and side condition
/// hold, in application order.
std::vector<Substitution> rule_matches(const Program& p, const RewriteRule& rule);

/// Repeat apply_rule until it stops matching; log and point maps compose.
ApplyResult apply_rule_exhaustively(const Program& p, const RewriteRule& rule);

// -- pipelines ---------------------------------------------------------------

struct PipelineItem {
  RewriteRule rule;
  bool exhaustive = false;
};

/// Parse "cp,dce*,hoist" ('*' repeats the rule until it stops matching).
std::vector<PipelineItem> parse_pipeline(const std::string& text);

}  // namespace osrlab
