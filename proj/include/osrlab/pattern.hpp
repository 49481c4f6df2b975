#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "osrlab/program.hpp"

namespace osrlab {

/// Meta-variables live in a namespace disjoint from program identifiers;
/// they only occur inside patterns and formulas.
struct MetaVar {
  std::string name;
  bool operator==(const MetaVar& o) const { return name == o.name; }
  bool operator<(const MetaVar& o) const { return name < o.name; }
};

using VarTerm = std::variant<std::string, MetaVar>;
using PointTerm = std::variant<int, MetaVar>;
using ExprTerm = std::variant<Expr, MetaVar>;

/// Expression slot of an instruction pattern. Either concrete, or a meta
/// expression `e`, optionally with a focus variable (`e[v]` on a left-hand
/// side: v must occur in the matched expression) or a substitution
/// (`e[c]` on a right-hand side: the bound e with `from` replaced by `to`).
struct ExprPat {
  std::optional<Expr> concrete;
  std::optional<std::string> meta;
  std::optional<VarTerm> focus;
  std::optional<VarTerm> subst_from;
  std::optional<ExprTerm> subst_to;

  static ExprPat exact(Expr e) { return ExprPat{std::move(e), {}, {}, {}, {}}; }
  static ExprPat any(std::string name) { return ExprPat{{}, std::move(name), {}, {}, {}}; }
  static ExprPat with_var(std::string name, VarTerm v) {
    return ExprPat{{}, std::move(name), std::move(v), {}, {}};
  }
  static ExprPat substituted(std::string name, VarTerm from, ExprTerm to) {
    return ExprPat{{}, std::move(name), {}, std::move(from), std::move(to)};
  }
};

struct PatAssign {
  VarTerm target;
  ExprPat rhs;
};
struct PatCondGoto {
  ExprPat cond;
  PointTerm target;
};
struct PatGoto {
  PointTerm target;
};
struct PatSkip {};
struct PatAbort {};

using InstrPat = std::variant<PatAssign, PatCondGoto, PatGoto, PatSkip, PatAbort>;

class UnboundMetaVariable : public std::runtime_error {
 public:
  explicit UnboundMetaVariable(const std::string& name)
      : std::runtime_error("unbound meta-variable " + name) {}
};

/// Bindings from meta-variable names to program objects.
class Substitution {
 public:
  using Binding = std::variant<int, std::string, Expr>;

  bool bound(const std::string& meta) const { return map_.count(meta) != 0; }

  std::optional<int> point(const std::string& meta) const;
  std::optional<std::string> var(const std::string& meta) const;
  std::optional<Expr> expr(const std::string& meta) const;

  /// Bind or check consistency; returns false on a conflicting binding.
  bool bind_point(const std::string& meta, int value);
  bool bind_var(const std::string& meta, const std::string& value);
  bool bind_expr(const std::string& meta, const Expr& value);

  const std::map<std::string, Binding>& bindings() const { return map_; }

  /// Canonical text, for ordering and diagnostics.
  std::string str() const;
  bool operator==(const Substitution& o) const;

 private:
  std::map<std::string, Binding> map_;
};

/// Deterministic total order on substitutions (point bindings compare
/// numerically, others by text).
bool subst_less(const Substitution& a, const Substitution& b);

// Resolution under a substitution; nullopt when the meta is unbound.
std::optional<std::string> resolve_var(const VarTerm& t, const Substitution& theta);
std::optional<int> resolve_point(const PointTerm& t, const Substitution& theta);
std::optional<Expr> resolve_expr(const ExprTerm& t, const Substitution& theta);

/// All extensions of theta under which the pattern matches the instruction.
/// A focus variable with several occurrences in the matched expression
/// produces one extension per candidate, in sorted order.
std::vector<Substitution> match_instr(const InstrPat& pat, const Instr& instr,
                                      const Substitution& theta);

/// Concrete instruction denoted by the pattern under theta.
/// Throws UnboundMetaVariable when a slot is unresolved.
Instr instantiate_instr(const InstrPat& pat, const Substitution& theta);

}  // namespace osrlab
