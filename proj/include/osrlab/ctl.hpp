#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "osrlab/pattern.hpp"
#include "osrlab/program.hpp"

namespace osrlab {

/// Path semantics for the Until quantifiers.
///  - Fixpoint: least-fixpoint evaluation over the full CFG; all-paths
///    Until requires reaching the goal along every path, so it fails on
///    cycles that never do.
///  - MaximalFinite: quantification over complete paths (finite maximal
///    CFG paths ending at a sink); nodes heading no complete path satisfy
///    all-paths Until vacuously and no exists-path Until.
/// The two agree on acyclic graphs.
enum class PathSemantics { Fixpoint, MaximalFinite };

enum class Quant { All, Exists };
enum class Dir { Fwd, Bwd };

struct CtlFormula;
using CtlRef = std::shared_ptr<const CtlFormula>;

struct AtomTrue {};
struct AtomDef { VarTerm var; };
struct AtomUse { VarTerm var; };
struct AtomStmt { InstrPat pat; };
struct AtomPoint { PointTerm point; };
/// Point is transparent for the expression: it does not assign to any of
/// its free variables.
struct AtomTrans { ExprTerm expr; };
// point-independent atoms
struct AtomConLit { ExprTerm expr; };
struct AtomFreeVar { VarTerm var; ExprTerm expr; };

struct FNot { CtlRef inner; };
struct FAnd { std::vector<CtlRef> parts; };
struct FOr { std::vector<CtlRef> parts; };
struct FNext { Dir dir; Quant quant; CtlRef inner; };
struct FUntil { Dir dir; Quant quant; CtlRef hold; CtlRef goal; };
/// Judgment anchored at a specific point, point-independent as a whole.
struct FAt { PointTerm point; CtlRef inner; };

struct CtlFormula {
  std::variant<AtomTrue, AtomDef, AtomUse, AtomStmt, AtomPoint, AtomTrans, AtomConLit,
               AtomFreeVar, FNot, FAnd, FOr, FNext, FUntil, FAt>
      node;
};

namespace ctl {
CtlRef tru();
CtlRef def(VarTerm x);
CtlRef use(VarTerm x);
CtlRef stmt(InstrPat pat);
CtlRef point(PointTerm m);
CtlRef trans(ExprTerm e);
CtlRef conlit(ExprTerm e);
CtlRef freevar(VarTerm x, ExprTerm e);
CtlRef fnot(CtlRef f);
CtlRef fand(std::vector<CtlRef> fs);
CtlRef forr(std::vector<CtlRef> fs);
CtlRef next(Dir d, Quant q, CtlRef f);
CtlRef until(Dir d, Quant q, CtlRef hold, CtlRef goal);
CtlRef at(PointTerm m, CtlRef f);

/// def-assigned-on-all-entry-paths AND used-on-some-path-before-redefinition.
CtlRef is_live(VarTerm x);
/// The unique definition of x reaching the current point is at def_point.
CtlRef urdef(VarTerm x, PointTerm def_point);
/// n dominates m, judged at the entry point.
CtlRef dominates(PointTerm n, PointTerm m);
}  // namespace ctl

std::string formula_str(const CtlFormula& f);

/// Truth of a ground formula at a point. Throws UnboundMetaVariable when
/// the formula still contains meta-variables.
bool check_ctl(const Program& p, int point, const CtlRef& formula, PathSemantics mode);

/// Truth of a ground, point-independent formula (anchored judgments,
/// global atoms, and connectives over them).
bool check_ctl_global(const Program& p, const CtlRef& formula, PathSemantics mode);

/// All substitutions that make the formula true globally, in deterministic
/// order. Candidates are drawn from the program's own points, variables and
/// subexpressions; `anchors` restricts candidate points per meta-variable.
std::vector<Substitution> find_substitutions(
    const Program& p, const CtlRef& formula,
    const std::map<std::string, std::vector<int>>& anchors = {},
    PathSemantics mode = PathSemantics::Fixpoint);

/// Extensions of `base` binding the formula's remaining meta-variables so
/// that it holds globally; the workhorse behind find_substitutions and
/// rule application.
std::vector<Substitution> complete_substitutions(
    const Program& p, const CtlRef& formula, const Substitution& base,
    const std::map<std::string, std::vector<int>>& anchors = {},
    PathSemantics mode = PathSemantics::Fixpoint);

/// Ground formula obtained by applying theta (unbound metas stay).
CtlRef apply_substitution(const CtlRef& formula, const Substitution& theta);

/// Prefix text syntax, e.g. "(fwd-EU (not (def X)) (use X))".
CtlRef parse_ctl(const std::string& text);

}  // namespace osrlab
