#include "osrlab/rewrite.hpp"

#include <algorithm>
#include <functional>

namespace osrlab {

RewriteRule builtin_cp() {
  MetaVar m{"m"}, x{"x"}, v{"v"}, c{"c"};
  RuleClause clause{
      "m",
      PatAssign{x, ExprPat::with_var("e", v)},
      PatAssign{x, ExprPat::substituted("e", v, c)},
  };
  // some constant c reaches every backward path's first definition of v
  CtlRef side = ctl::fand(
      {ctl::conlit(c),
       ctl::at(m, ctl::until(Dir::Bwd, Quant::All, ctl::fnot(ctl::def(v)),
                             ctl::stmt(PatAssign{v, ExprPat::any("c")})))});
  return RewriteRule{"cp", {clause}, side};
}

RewriteRule builtin_dce() {
  MetaVar m{"m"}, x{"x"};
  RuleClause clause{"m", PatAssign{x, ExprPat::any("e")}, PatSkip{}};
  // no forward path from any successor ever reads the target
  CtlRef side = ctl::at(
      m, ctl::next(Dir::Fwd, Quant::All,
                   ctl::fnot(ctl::until(Dir::Fwd, Quant::Exists, ctl::tru(), ctl::use(x)))));
  return RewriteRule{"dce", {clause}, side};
}

RewriteRule builtin_hoist() {
  MetaVar p{"p"}, q{"q"}, x{"x"};
  RuleClause insert{"p", PatSkip{}, PatAssign{x, ExprPat::any("e")}};
  RuleClause remove{"q", PatAssign{x, ExprPat::any("e")}, PatSkip{}};
  // target unused between the insertion point and the original site, and
  // nothing on the way back redefines the target or the moved expression
  CtlRef side = ctl::fand(
      {ctl::at(p, ctl::until(Dir::Fwd, Quant::All, ctl::fnot(ctl::use(x)), ctl::point(q))),
       ctl::at(q, ctl::until(Dir::Bwd, Quant::All,
                             ctl::fand({ctl::forr({ctl::fnot(ctl::def(x)), ctl::point(q)}),
                                        ctl::trans(MetaVar{"e"})}),
                             ctl::point(p)))});
  return RewriteRule{"hoist", {insert, remove}, side};
}

std::optional<RewriteRule> builtin_rule(const std::string& name) {
  if (name == "cp") return builtin_cp();
  if (name == "dce") return builtin_dce();
  if (name == "hoist") return builtin_hoist();
  return std::nullopt;
}

std::string action_str(const Action& action) {
  struct Visitor {
    std::string operator()(const AddInstr& a) const {
      return "add \"" + instr_str(a.instr) + "\" at " + std::to_string(a.at);
    }
    std::string operator()(const DeleteInstr& a) const {
      return "delete at " + std::to_string(a.at);
    }
    std::string operator()(const HoistInstr& a) const {
      return "hoist " + std::to_string(a.from) + " -> " + std::to_string(a.to);
    }
    std::string operator()(const SinkInstr& a) const {
      return "sink " + std::to_string(a.from) + " -> " + std::to_string(a.to);
    }
    std::string operator()(const ReplaceOperand& a) const {
      return "replace " + a.old_op.str() + " with " + a.new_op.str() + " at " +
             std::to_string(a.at);
    }
    std::string operator()(const ReplaceAllUses& a) const {
      return "replace-all " + a.old_op.str() + " with " + a.new_op.str();
    }
  };
  return std::visit(Visitor{}, action);
}

namespace {

Instr replace_in_instr(const Instr& instr, const Expr& old_op, const Expr& new_op,
                       bool* replaced) {
  if (const auto* a = std::get_if<Assign>(&instr)) {
    if (contains_subexpr(a->rhs, old_op)) {
      if (replaced) *replaced = true;
      return Assign{a->target, substitute_expr(a->rhs, old_op, new_op)};
    }
    return instr;
  }
  if (const auto* c = std::get_if<CondGoto>(&instr)) {
    if (contains_subexpr(c->cond, old_op)) {
      if (replaced) *replaced = true;
      return CondGoto{substitute_expr(c->cond, old_op, new_op), c->target};
    }
    return instr;
  }
  return instr;
}

void check_point(const std::vector<Instr>& instrs, int at, const char* what) {
  const int n = static_cast<int>(instrs.size());
  if (at < 2 || at > n - 1)
    throw InvalidAction(std::string(what) + " at " + std::to_string(at) +
                        " is outside the body [2," + std::to_string(n - 1) + "]");
}

}  // namespace

Program replay_log(const Program& p, const ActionLog& log) {
  std::vector<Instr> instrs = p.instrs();

  for (const Action& action : log) {
    if (const auto* add = std::get_if<AddInstr>(&action)) {
      const int n = static_cast<int>(instrs.size());
      if (add->at < 2 || add->at > n)
        throw InvalidAction("insertion point " + std::to_string(add->at) + " out of range");
      for (Instr& instr : instrs)
        if (auto t = goto_target(instr); t && *t >= add->at)
          instr = with_goto_target(instr, *t + 1);
      instrs.insert(instrs.begin() + (add->at - 1), add->instr);
    } else if (const auto* del = std::get_if<DeleteInstr>(&action)) {
      check_point(instrs, del->at, "delete");
      instrs[static_cast<size_t>(del->at - 1)] = Skip{};
    } else if (const auto* hoist = std::get_if<HoistInstr>(&action)) {
      check_point(instrs, hoist->from, "hoist");
      check_point(instrs, hoist->to, "hoist");
      if (hoist->to >= hoist->from) throw InvalidAction("hoist must move upward");
      if (!std::holds_alternative<Skip>(instrs[static_cast<size_t>(hoist->to - 1)]))
        throw InvalidAction("hoist target " + std::to_string(hoist->to) + " is not skip");
      instrs[static_cast<size_t>(hoist->to - 1)] = instrs[static_cast<size_t>(hoist->from - 1)];
      instrs[static_cast<size_t>(hoist->from - 1)] = Skip{};
    } else if (const auto* sink = std::get_if<SinkInstr>(&action)) {
      check_point(instrs, sink->from, "sink");
      check_point(instrs, sink->to, "sink");
      if (sink->to <= sink->from) throw InvalidAction("sink must move downward");
      if (!std::holds_alternative<Skip>(instrs[static_cast<size_t>(sink->to - 1)]))
        throw InvalidAction("sink target " + std::to_string(sink->to) + " is not skip");
      instrs[static_cast<size_t>(sink->to - 1)] = instrs[static_cast<size_t>(sink->from - 1)];
      instrs[static_cast<size_t>(sink->from - 1)] = Skip{};
    } else if (const auto* rep = std::get_if<ReplaceOperand>(&action)) {
      const int n = static_cast<int>(instrs.size());
      if (rep->at < 1 || rep->at > n)
        throw InvalidAction("replace point " + std::to_string(rep->at) + " out of range");
      bool replaced = false;
      instrs[static_cast<size_t>(rep->at - 1)] =
          replace_in_instr(instrs[static_cast<size_t>(rep->at - 1)], rep->old_op, rep->new_op,
                           &replaced);
      if (!replaced)
        throw InvalidAction("operand " + rep->old_op.str() + " does not occur at point " +
                            std::to_string(rep->at));
    } else {
      const auto& all = std::get<ReplaceAllUses>(action);
      for (Instr& instr : instrs) instr = replace_in_instr(instr, all.old_op, all.new_op, nullptr);
    }
  }
  return Program::make(std::move(instrs));
}

Program pad_program(const Program& p, int at, int count) {
  ActionLog log;
  for (int i = 0; i < count; ++i) log.push_back(AddInstr{Skip{}, at});
  return replay_log(p, log);
}

PointMap identity_point_map(int size) {
  PointMap map;
  for (int i = 1; i <= size; ++i) map[i] = i;
  return map;
}

PointMap invert_point_map(const PointMap& map) {
  PointMap out;
  for (const auto& [from, to] : map) out[to] = from;
  return out;
}

std::vector<Substitution> rule_matches(const Program& p, const RewriteRule& rule) {
  std::vector<Substitution> results;
  const int n = p.size();
  const size_t clauses = rule.clauses.size();

  // clause point tuples in ascending lexicographic order
  std::function<void(size_t, Substitution)> assign_points = [&](size_t idx, Substitution theta) {
    if (idx == clauses) {
      // match clause patterns, branching where a pattern is ambiguous
      std::vector<Substitution> frontier{theta};
      for (const RuleClause& clause : rule.clauses) {
        std::vector<Substitution> next;
        for (const Substitution& t : frontier) {
          int point = *t.point(clause.point_meta);
          auto exts = match_instr(clause.lhs, p.at(point), t);
          next.insert(next.end(), exts.begin(), exts.end());
        }
        frontier = std::move(next);
        if (frontier.empty()) return;
      }
      for (const Substitution& t : frontier) {
        auto completions = complete_substitutions(p, rule.side, t);
        results.insert(results.end(), completions.begin(), completions.end());
      }
      return;
    }
    for (int l = 1; l <= n; ++l) {
      Substitution t = theta;
      if (t.bind_point(rule.clauses[idx].point_meta, l)) assign_points(idx + 1, std::move(t));
    }
  };
  assign_points(0, Substitution{});

  // order by clause point bindings, then the remaining bindings
  std::stable_sort(results.begin(), results.end(),
                   [&](const Substitution& a, const Substitution& b) {
                     for (const RuleClause& clause : rule.clauses) {
                       int ap = *a.point(clause.point_meta);
                       int bp = *b.point(clause.point_meta);
                       if (ap != bp) return ap < bp;
                     }
                     return subst_less(a, b);
                   });
  results.erase(std::unique(results.begin(), results.end()), results.end());
  return results;
}

namespace {

ActionLog synthesize_actions(const Program& p, const RewriteRule& rule,
                             const Substitution& theta) {
  ActionLog log;
  std::vector<bool> consumed(rule.clauses.size(), false);

  // paired skip/assignment swaps become moves
  for (size_t i = 0; i < rule.clauses.size(); ++i) {
    if (consumed[i] || !std::holds_alternative<PatSkip>(rule.clauses[i].lhs)) continue;
    for (size_t j = 0; j < rule.clauses.size(); ++j) {
      if (i == j || consumed[j] || !std::holds_alternative<PatSkip>(rule.clauses[j].rhs)) continue;
      Instr inserted = instantiate_instr(rule.clauses[i].rhs, theta);
      Instr removed = instantiate_instr(rule.clauses[j].lhs, theta);
      if (!(inserted == removed)) continue;
      int to = *theta.point(rule.clauses[i].point_meta);
      int from = *theta.point(rule.clauses[j].point_meta);
      if (to < from) log.push_back(HoistInstr{from, to});
      else log.push_back(SinkInstr{from, to});
      consumed[i] = consumed[j] = true;
      break;
    }
  }

  for (size_t k = 0; k < rule.clauses.size(); ++k) {
    if (consumed[k]) continue;
    const RuleClause& clause = rule.clauses[k];
    int at = *theta.point(clause.point_meta);
    Instr before = p.at(at);
    Instr after = instantiate_instr(clause.rhs, theta);
    if (before == after) continue;
    if (std::holds_alternative<Skip>(after) && std::holds_alternative<Assign>(before)) {
      log.push_back(DeleteInstr{at});
      continue;
    }
    const auto* ba = std::get_if<Assign>(&before);
    const auto* aa = std::get_if<Assign>(&after);
    if (ba && aa && ba->target == aa->target) {
      const ExprPat* rhs_pat = &std::get<PatAssign>(clause.rhs).rhs;
      if (rhs_pat->subst_from) {
        auto from = resolve_var(*rhs_pat->subst_from, theta);
        auto to = resolve_expr(*rhs_pat->subst_to, theta);
        if (from && to) {
          log.push_back(ReplaceOperand{at, Expr::var(*from), *to});
          continue;
        }
      }
      log.push_back(ReplaceOperand{at, ba->rhs, aa->rhs});
      continue;
    }
    const auto* bc = std::get_if<CondGoto>(&before);
    const auto* ac = std::get_if<CondGoto>(&after);
    if (bc && ac && bc->target == ac->target) {
      log.push_back(ReplaceOperand{at, bc->cond, ac->cond});
      continue;
    }
    throw InvalidAction("rule '" + rule.name + "' rewrites an unsupported instruction shape");
  }
  return log;
}

}  // namespace

std::optional<ApplyResult> apply_rule(const Program& p, const RewriteRule& rule) {
  auto matches = rule_matches(p, rule);
  if (matches.empty()) return std::nullopt;
  const Substitution& theta = matches.front();

  std::vector<Instr> instrs = p.instrs();
  for (const RuleClause& clause : rule.clauses) {
    int at = *theta.point(clause.point_meta);
    instrs[static_cast<size_t>(at - 1)] = instantiate_instr(clause.rhs, theta);
  }
  ApplyResult result{Program::make(std::move(instrs)), identity_point_map(p.size()),
                     identity_point_map(p.size()), synthesize_actions(p, rule, theta), theta};
  return result;
}

ApplyResult apply_rule_exhaustively(const Program& p, const RewriteRule& rule) {
  ApplyResult acc{p, identity_point_map(p.size()), identity_point_map(p.size()), {}, {}};
  while (auto next = apply_rule(acc.program, rule)) {
    acc.program = next->program;
    acc.log.insert(acc.log.end(), next->log.begin(), next->log.end());
    acc.theta = next->theta;
    // built-in rules keep the identity point maps; composition is trivial
  }
  return acc;
}

std::vector<PipelineItem> parse_pipeline(const std::string& text) {
  std::vector<PipelineItem> items;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    std::string name = text.substr(start, comma == std::string::npos ? comma : comma - start);
    start = comma == std::string::npos ? text.size() + 1 : comma + 1;
    if (name.empty()) continue;
    bool exhaustive = name.back() == '*';
    if (exhaustive) name.pop_back();
    auto rule = builtin_rule(name);
    if (!rule) throw std::invalid_argument("unknown rule '" + name + "'");
    items.push_back(PipelineItem{*rule, exhaustive});
  }
  return items;
}

}  // namespace osrlab
