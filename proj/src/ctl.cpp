#include "osrlab/ctl.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "osrlab/cfg.hpp"
#include "osrlab/parse.hpp"

namespace osrlab {

namespace ctl {

static CtlRef make(CtlFormula f) { return std::make_shared<const CtlFormula>(std::move(f)); }

CtlRef tru() { return make({AtomTrue{}}); }
CtlRef def(VarTerm x) { return make({AtomDef{std::move(x)}}); }
CtlRef use(VarTerm x) { return make({AtomUse{std::move(x)}}); }
CtlRef stmt(InstrPat pat) { return make({AtomStmt{std::move(pat)}}); }
CtlRef point(PointTerm m) { return make({AtomPoint{std::move(m)}}); }
CtlRef trans(ExprTerm e) { return make({AtomTrans{std::move(e)}}); }
CtlRef conlit(ExprTerm e) { return make({AtomConLit{std::move(e)}}); }
CtlRef freevar(VarTerm x, ExprTerm e) { return make({AtomFreeVar{std::move(x), std::move(e)}}); }
CtlRef fnot(CtlRef f) { return make({FNot{std::move(f)}}); }
CtlRef fand(std::vector<CtlRef> fs) { return make({FAnd{std::move(fs)}}); }
CtlRef forr(std::vector<CtlRef> fs) { return make({FOr{std::move(fs)}}); }
CtlRef next(Dir d, Quant q, CtlRef f) { return make({FNext{d, q, std::move(f)}}); }
CtlRef until(Dir d, Quant q, CtlRef hold, CtlRef goal) {
  return make({FUntil{d, q, std::move(hold), std::move(goal)}});
}
CtlRef at(PointTerm m, CtlRef f) { return make({FAt{std::move(m), std::move(f)}}); }

CtlRef is_live(VarTerm x) {
  return fand({next(Dir::Bwd, Quant::All, until(Dir::Bwd, Quant::All, tru(), def(x))),
               until(Dir::Fwd, Quant::Exists, fnot(def(x)), use(x))});
}

CtlRef urdef(VarTerm x, PointTerm def_point) {
  return next(Dir::Bwd, Quant::All,
              until(Dir::Bwd, Quant::All, fnot(def(x)),
                    fand({point(def_point), def(x)})));
}

CtlRef dominates(PointTerm n, PointTerm m) {
  return at(1, fnot(until(Dir::Fwd, Quant::Exists, fnot(point(n)), point(m))));
}

}  // namespace ctl

namespace {

std::string var_term_str(const VarTerm& t) {
  if (const std::string* v = std::get_if<std::string>(&t)) return *v;
  return "?" + std::get<MetaVar>(t).name;
}
std::string point_term_str(const PointTerm& t) {
  if (const int* v = std::get_if<int>(&t)) return std::to_string(*v);
  return "?" + std::get<MetaVar>(t).name;
}
std::string expr_term_str(const ExprTerm& t) {
  if (const Expr* v = std::get_if<Expr>(&t)) return v->str();
  return "?" + std::get<MetaVar>(t).name;
}

std::string instr_pat_str(const InstrPat& pat) {
  if (const auto* pa = std::get_if<PatAssign>(&pat)) {
    std::string rhs;
    const ExprPat& e = pa->rhs;
    if (e.concrete) rhs = e.concrete->str();
    else {
      rhs = "?" + *e.meta;
      if (e.focus) rhs += "[" + var_term_str(*e.focus) + "]";
      if (e.subst_from)
        rhs += "[" + var_term_str(*e.subst_from) + ":=" + expr_term_str(*e.subst_to) + "]";
    }
    return var_term_str(pa->target) + " := " + rhs;
  }
  if (const auto* pc = std::get_if<PatCondGoto>(&pat)) {
    std::string cond = pc->cond.concrete ? pc->cond.concrete->str() : "?" + *pc->cond.meta;
    return "if (" + cond + ") goto " + point_term_str(pc->target);
  }
  if (const auto* pg = std::get_if<PatGoto>(&pat)) return "goto " + point_term_str(pg->target);
  if (std::holds_alternative<PatSkip>(pat)) return "skip";
  return "abort";
}

}  // namespace

std::string formula_str(const CtlFormula& f) {
  struct Visitor {
    std::string operator()(const AtomTrue&) const { return "true"; }
    std::string operator()(const AtomDef& a) const { return "(def " + var_term_str(a.var) + ")"; }
    std::string operator()(const AtomUse& a) const { return "(use " + var_term_str(a.var) + ")"; }
    std::string operator()(const AtomStmt& a) const {
      return "(stmt \"" + instr_pat_str(a.pat) + "\")";
    }
    std::string operator()(const AtomPoint& a) const {
      return "(point " + point_term_str(a.point) + ")";
    }
    std::string operator()(const AtomTrans& a) const {
      return "(trans \"" + expr_term_str(a.expr) + "\")";
    }
    std::string operator()(const AtomConLit& a) const {
      return "(conlit \"" + expr_term_str(a.expr) + "\")";
    }
    std::string operator()(const AtomFreeVar& a) const {
      return "(freevar " + var_term_str(a.var) + " \"" + expr_term_str(a.expr) + "\")";
    }
    std::string operator()(const FNot& f) const { return "(not " + formula_str(*f.inner) + ")"; }
    std::string operator()(const FAnd& f) const {
      std::string out = "(and";
      for (const auto& part : f.parts) out += " " + formula_str(*part);
      return out + ")";
    }
    std::string operator()(const FOr& f) const {
      std::string out = "(or";
      for (const auto& part : f.parts) out += " " + formula_str(*part);
      return out + ")";
    }
    std::string operator()(const FNext& f) const {
      std::string op = std::string(f.dir == Dir::Fwd ? "fwd-" : "bwd-") +
                       (f.quant == Quant::All ? "AX" : "EX");
      return "(" + op + " " + formula_str(*f.inner) + ")";
    }
    std::string operator()(const FUntil& f) const {
      std::string op = std::string(f.dir == Dir::Fwd ? "fwd-" : "bwd-") +
                       (f.quant == Quant::All ? "AU" : "EU");
      return "(" + op + " " + formula_str(*f.hold) + " " + formula_str(*f.goal) + ")";
    }
    std::string operator()(const FAt& f) const {
      return "(at " + point_term_str(f.point) + " " + formula_str(*f.inner) + ")";
    }
  };
  return std::visit(Visitor{}, f.node);
}

namespace {

class Evaluator {
 public:
  Evaluator(const Program& p, PathSemantics mode)
      : p_(p), mode_(mode), cfg_(build_cfg(p)), rcfg_(cfg_.reversed()) {}

  // satisfaction vector over points 1..n (index 0 unused)
  const std::vector<bool>& eval(const CtlRef& f) {
    auto it = memo_.find(f.get());
    if (it != memo_.end()) return it->second;
    return memo_.emplace(f.get(), compute(f)).first->second;
  }

  bool at_point(const CtlRef& f, int point) { return eval(f)[static_cast<size_t>(point)]; }

 private:
  std::vector<bool> constant(bool value) const {
    return std::vector<bool>(static_cast<size_t>(p_.size()) + 1, value);
  }

  const Cfg& graph(Dir dir) const { return dir == Dir::Fwd ? cfg_ : rcfg_; }

  std::vector<bool> compute(const CtlRef& f) {
    const int n = p_.size();
    struct Visitor {
      Evaluator& ev;
      const int n;

      std::vector<bool> operator()(const AtomTrue&) const { return ev.constant(true); }

      std::vector<bool> operator()(const AtomDef& a) const {
        auto x = resolve_var(a.var, {});
        if (!x) throw UnboundMetaVariable(var_term_str(a.var));
        auto out = ev.constant(false);
        for (int l = 1; l <= n; ++l) out[static_cast<size_t>(l)] = defines(ev.p_.at(l), *x);
        return out;
      }

      std::vector<bool> operator()(const AtomUse& a) const {
        auto x = resolve_var(a.var, {});
        if (!x) throw UnboundMetaVariable(var_term_str(a.var));
        auto out = ev.constant(false);
        for (int l = 1; l <= n; ++l) out[static_cast<size_t>(l)] = uses(ev.p_.at(l), *x);
        return out;
      }

      std::vector<bool> operator()(const AtomStmt& a) const {
        Instr instr = instantiate_instr(a.pat, {});
        auto out = ev.constant(false);
        for (int l = 1; l <= n; ++l) out[static_cast<size_t>(l)] = (ev.p_.at(l) == instr);
        return out;
      }

      std::vector<bool> operator()(const AtomPoint& a) const {
        auto m = resolve_point(a.point, {});
        if (!m) throw UnboundMetaVariable(point_term_str(a.point));
        auto out = ev.constant(false);
        if (*m >= 1 && *m <= n) out[static_cast<size_t>(*m)] = true;
        return out;
      }

      std::vector<bool> operator()(const AtomTrans& a) const {
        auto e = resolve_expr(a.expr, {});
        if (!e) throw UnboundMetaVariable(expr_term_str(a.expr));
        auto vars = expr_vars(*e);
        auto out = ev.constant(true);
        for (int l = 1; l <= n; ++l) {
          auto target = assign_target(ev.p_.at(l));
          if (target && vars.count(*target)) out[static_cast<size_t>(l)] = false;
        }
        return out;
      }

      std::vector<bool> operator()(const AtomConLit& a) const {
        auto e = resolve_expr(a.expr, {});
        if (!e) throw UnboundMetaVariable(expr_term_str(a.expr));
        return ev.constant(is_const_lit(*e));
      }

      std::vector<bool> operator()(const AtomFreeVar& a) const {
        auto x = resolve_var(a.var, {});
        auto e = resolve_expr(a.expr, {});
        if (!x) throw UnboundMetaVariable(var_term_str(a.var));
        if (!e) throw UnboundMetaVariable(expr_term_str(a.expr));
        return ev.constant(is_free_var(*x, *e));
      }

      std::vector<bool> operator()(const FNot& f) const {
        auto inner = ev.eval(f.inner);
        for (size_t i = 0; i < inner.size(); ++i) inner[i] = !inner[i];
        return inner;
      }

      std::vector<bool> operator()(const FAnd& f) const {
        auto out = ev.constant(true);
        for (const auto& part : f.parts) {
          const auto& sat = ev.eval(part);
          for (size_t i = 0; i < out.size(); ++i) out[i] = out[i] && sat[i];
        }
        return out;
      }

      std::vector<bool> operator()(const FOr& f) const {
        auto out = ev.constant(false);
        for (const auto& part : f.parts) {
          const auto& sat = ev.eval(part);
          for (size_t i = 0; i < out.size(); ++i) out[i] = out[i] || sat[i];
        }
        return out;
      }

      std::vector<bool> operator()(const FNext& f) const {
        const auto& sat = ev.eval(f.inner);
        const Cfg& g = ev.graph(f.dir);
        auto out = ev.constant(false);
        for (int l = 1; l <= n; ++l) {
          const auto& succs = g.successors(l);
          bool value = f.quant == Quant::All;
          for (int s : succs) {
            bool v = sat[static_cast<size_t>(s)];
            value = f.quant == Quant::All ? (value && v) : (value || v);
          }
          out[static_cast<size_t>(l)] = value;  // All over no successors: vacuous
        }
        return out;
      }

      std::vector<bool> operator()(const FUntil& f) const { return ev.eval_until(f); }

      std::vector<bool> operator()(const FAt& f) const {
        auto m = resolve_point(f.point, {});
        if (!m) throw UnboundMetaVariable(point_term_str(f.point));
        bool value = *m >= 1 && *m <= n && ev.eval(f.inner)[static_cast<size_t>(*m)];
        return ev.constant(value);
      }
    };
    return std::visit(Visitor{*this, n}, f->node);
  }

  std::vector<bool> eval_until(const FUntil& f) {
    const int n = p_.size();
    const Cfg& g = graph(f.dir);
    const auto& hold = eval(f.hold);
    const auto& goal = eval(f.goal);

    if (mode_ == PathSemantics::Fixpoint) {
      // exists: lfp goal ∨ (hold ∧ ∃succ sat)
      // all:    lfp goal ∨ (hold ∧ has-succ ∧ ∀succ sat); a sink on the
      //         path must itself satisfy the goal
      auto sat = constant(false);
      bool changed = true;
      while (changed) {
        changed = false;
        for (int l = 1; l <= n; ++l) {
          if (sat[static_cast<size_t>(l)]) continue;
          bool value = goal[static_cast<size_t>(l)];
          if (!value && hold[static_cast<size_t>(l)]) {
            const auto& succs = g.successors(l);
            if (f.quant == Quant::Exists) {
              for (int s : succs) value = value || sat[static_cast<size_t>(s)];
            } else if (!succs.empty()) {
              value = true;
              for (int s : succs) value = value && sat[static_cast<size_t>(s)];
            }
          }
          if (value) {
            sat[static_cast<size_t>(l)] = true;
            changed = true;
          }
        }
      }
      return sat;
    }

    // complete-path semantics over the sink-reaching subgraph
    auto can_reach = g.can_reach_sink();
    if (f.quant == Quant::Exists) {
      auto sat = constant(false);
      bool changed = true;
      while (changed) {
        changed = false;
        for (int l = 1; l <= n; ++l) {
          if (sat[static_cast<size_t>(l)]) continue;
          bool value = goal[static_cast<size_t>(l)] && can_reach[static_cast<size_t>(l)];
          if (!value && hold[static_cast<size_t>(l)])
            for (int s : g.successors(l)) value = value || sat[static_cast<size_t>(s)];
          if (value) {
            sat[static_cast<size_t>(l)] = true;
            changed = true;
          }
        }
      }
      return sat;
    }

    // all complete paths: compute the violating points (some complete path
    // misses the goal or breaks hold first); nodes heading no complete
    // path are vacuously satisfied
    auto viol = constant(false);
    bool changed = true;
    while (changed) {
      changed = false;
      for (int l = 1; l <= n; ++l) {
        if (viol[static_cast<size_t>(l)] || goal[static_cast<size_t>(l)]) continue;
        const auto& succs = g.successors(l);
        bool value = succs.empty();  // sink without the goal
        if (!value) {
          bool continuable = false;
          for (int s : succs) continuable = continuable || can_reach[static_cast<size_t>(s)];
          if (!hold[static_cast<size_t>(l)] && continuable) value = true;
          if (!value)
            for (int s : succs) value = value || viol[static_cast<size_t>(s)];
        }
        if (value) {
          viol[static_cast<size_t>(l)] = true;
          changed = true;
        }
      }
    }
    auto sat = constant(false);
    for (int l = 1; l <= n; ++l) sat[static_cast<size_t>(l)] = !viol[static_cast<size_t>(l)];
    return sat;
  }

  const Program& p_;
  PathSemantics mode_;
  Cfg cfg_;
  Cfg rcfg_;
  std::map<const CtlFormula*, std::vector<bool>> memo_;
};

bool is_global_formula(const CtlFormula& f) {
  if (std::holds_alternative<AtomTrue>(f.node) || std::holds_alternative<AtomConLit>(f.node) ||
      std::holds_alternative<AtomFreeVar>(f.node) || std::holds_alternative<FAt>(f.node))
    return true;
  if (const auto* fn = std::get_if<FNot>(&f.node)) return is_global_formula(*fn->inner);
  if (const auto* fa = std::get_if<FAnd>(&f.node)) {
    for (const auto& part : fa->parts)
      if (!is_global_formula(*part)) return false;
    return true;
  }
  if (const auto* fo = std::get_if<FOr>(&f.node)) {
    for (const auto& part : fo->parts)
      if (!is_global_formula(*part)) return false;
    return true;
  }
  return false;
}

}  // namespace

bool check_ctl(const Program& p, int point, const CtlRef& formula, PathSemantics mode) {
  Evaluator ev(p, mode);
  return ev.at_point(formula, point);
}

bool check_ctl_global(const Program& p, const CtlRef& formula, PathSemantics mode) {
  if (!is_global_formula(*formula))
    throw std::invalid_argument("formula is not point-independent: " + formula_str(*formula));
  Evaluator ev(p, mode);
  return ev.at_point(formula, 1);
}

// ---------------------------------------------------------------------------
// substitution search

namespace {

enum class MetaSort { Point, Var, Expr };

void note_meta(std::map<std::string, MetaSort>& metas, const std::string& name, MetaSort sort) {
  auto [it, inserted] = metas.emplace(name, sort);
  if (!inserted && it->second != sort)
    throw std::invalid_argument("meta-variable " + name + " used at two different sorts");
}

void collect_var(std::map<std::string, MetaSort>& metas, const VarTerm& t) {
  if (const MetaVar* m = std::get_if<MetaVar>(&t)) note_meta(metas, m->name, MetaSort::Var);
}
void collect_point(std::map<std::string, MetaSort>& metas, const PointTerm& t) {
  if (const MetaVar* m = std::get_if<MetaVar>(&t)) note_meta(metas, m->name, MetaSort::Point);
}
void collect_expr_term(std::map<std::string, MetaSort>& metas, const ExprTerm& t) {
  if (const MetaVar* m = std::get_if<MetaVar>(&t)) note_meta(metas, m->name, MetaSort::Expr);
}

void collect_pat(std::map<std::string, MetaSort>& metas, const InstrPat& pat) {
  auto collect_expr_pat = [&](const ExprPat& e) {
    if (e.meta) note_meta(metas, *e.meta, MetaSort::Expr);
    if (e.focus) collect_var(metas, *e.focus);
    if (e.subst_from) collect_var(metas, *e.subst_from);
    if (e.subst_to) collect_expr_term(metas, *e.subst_to);
  };
  if (const auto* pa = std::get_if<PatAssign>(&pat)) {
    collect_var(metas, pa->target);
    collect_expr_pat(pa->rhs);
  } else if (const auto* pc = std::get_if<PatCondGoto>(&pat)) {
    collect_expr_pat(pc->cond);
    collect_point(metas, pc->target);
  } else if (const auto* pg = std::get_if<PatGoto>(&pat)) {
    collect_point(metas, pg->target);
  }
}

void collect_metas(const CtlFormula& f, std::map<std::string, MetaSort>& metas) {
  struct Visitor {
    std::map<std::string, MetaSort>& metas;
    void operator()(const AtomTrue&) const {}
    void operator()(const AtomDef& a) const { collect_var(metas, a.var); }
    void operator()(const AtomUse& a) const { collect_var(metas, a.var); }
    void operator()(const AtomStmt& a) const { collect_pat(metas, a.pat); }
    void operator()(const AtomPoint& a) const { collect_point(metas, a.point); }
    void operator()(const AtomTrans& a) const { collect_expr_term(metas, a.expr); }
    void operator()(const AtomConLit& a) const { collect_expr_term(metas, a.expr); }
    void operator()(const AtomFreeVar& a) const {
      collect_var(metas, a.var);
      collect_expr_term(metas, a.expr);
    }
    void operator()(const FNot& f) const { collect_metas(*f.inner, metas); }
    void operator()(const FAnd& f) const {
      for (const auto& part : f.parts) collect_metas(*part, metas);
    }
    void operator()(const FOr& f) const {
      for (const auto& part : f.parts) collect_metas(*part, metas);
    }
    void operator()(const FNext& f) const { collect_metas(*f.inner, metas); }
    void operator()(const FUntil& f) const {
      collect_metas(*f.hold, metas);
      collect_metas(*f.goal, metas);
    }
    void operator()(const FAt& f) const {
      collect_point(metas, f.point);
      collect_metas(*f.inner, metas);
    }
  };
  std::visit(Visitor{metas}, f.node);
}

VarTerm ground_var(const VarTerm& t, const Substitution& theta) {
  if (auto v = resolve_var(t, theta)) return *v;
  return t;
}
PointTerm ground_point(const PointTerm& t, const Substitution& theta) {
  if (auto v = resolve_point(t, theta)) return *v;
  return t;
}
ExprTerm ground_expr_term(const ExprTerm& t, const Substitution& theta) {
  if (auto v = resolve_expr(t, theta)) return *v;
  return t;
}

ExprPat ground_expr_pat(const ExprPat& e, const Substitution& theta) {
  if (e.concrete) return e;
  ExprPat out = e;
  if (out.subst_from) *out.subst_from = ground_var(*out.subst_from, theta);
  if (out.subst_to) *out.subst_to = ground_expr_term(*out.subst_to, theta);
  if (out.focus) *out.focus = ground_var(*out.focus, theta);
  if (auto base = theta.expr(*out.meta)) {
    if (out.subst_from) {
      const std::string* from = std::get_if<std::string>(&*out.subst_from);
      const Expr* to = out.subst_to ? std::get_if<Expr>(&*out.subst_to) : nullptr;
      if (from && to) return ExprPat::exact(substitute_expr(*base, Expr::var(*from), *to));
      return out;
    }
    if (!out.focus) return ExprPat::exact(*base);
    // focused patterns stay patterns; only match_instr consumes them
    return out;
  }
  return out;
}

InstrPat ground_pat(const InstrPat& pat, const Substitution& theta) {
  if (const auto* pa = std::get_if<PatAssign>(&pat))
    return PatAssign{ground_var(pa->target, theta), ground_expr_pat(pa->rhs, theta)};
  if (const auto* pc = std::get_if<PatCondGoto>(&pat))
    return PatCondGoto{ground_expr_pat(pc->cond, theta), ground_point(pc->target, theta)};
  if (const auto* pg = std::get_if<PatGoto>(&pat)) return PatGoto{ground_point(pg->target, theta)};
  return pat;
}

}  // namespace

CtlRef apply_substitution(const CtlRef& formula, const Substitution& theta) {
  struct Visitor {
    const Substitution& theta;
    CtlRef operator()(const AtomTrue&) const { return ctl::tru(); }
    CtlRef operator()(const AtomDef& a) const { return ctl::def(ground_var(a.var, theta)); }
    CtlRef operator()(const AtomUse& a) const { return ctl::use(ground_var(a.var, theta)); }
    CtlRef operator()(const AtomStmt& a) const { return ctl::stmt(ground_pat(a.pat, theta)); }
    CtlRef operator()(const AtomPoint& a) const { return ctl::point(ground_point(a.point, theta)); }
    CtlRef operator()(const AtomTrans& a) const {
      return ctl::trans(ground_expr_term(a.expr, theta));
    }
    CtlRef operator()(const AtomConLit& a) const {
      return ctl::conlit(ground_expr_term(a.expr, theta));
    }
    CtlRef operator()(const AtomFreeVar& a) const {
      return ctl::freevar(ground_var(a.var, theta), ground_expr_term(a.expr, theta));
    }
    CtlRef operator()(const FNot& f) const { return ctl::fnot(apply_substitution(f.inner, theta)); }
    CtlRef operator()(const FAnd& f) const {
      std::vector<CtlRef> parts;
      for (const auto& part : f.parts) parts.push_back(apply_substitution(part, theta));
      return ctl::fand(std::move(parts));
    }
    CtlRef operator()(const FOr& f) const {
      std::vector<CtlRef> parts;
      for (const auto& part : f.parts) parts.push_back(apply_substitution(part, theta));
      return ctl::forr(std::move(parts));
    }
    CtlRef operator()(const FNext& f) const {
      return ctl::next(f.dir, f.quant, apply_substitution(f.inner, theta));
    }
    CtlRef operator()(const FUntil& f) const {
      return ctl::until(f.dir, f.quant, apply_substitution(f.hold, theta),
                        apply_substitution(f.goal, theta));
    }
    CtlRef operator()(const FAt& f) const {
      return ctl::at(ground_point(f.point, theta), apply_substitution(f.inner, theta));
    }
  };
  return std::visit(Visitor{theta}, formula->node);
}

namespace {

std::vector<Expr> program_subexprs(const Program& p) {
  std::vector<Expr> out;
  auto add = [&](const Expr& e, auto&& self) -> void {
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    if (e.is_bin()) {
      self(e.lhs(), self);
      self(e.rhs(), self);
    }
  };
  for (int l = 1; l <= p.size(); ++l) {
    const Instr& instr = p.at(l);
    if (const auto* a = std::get_if<Assign>(&instr)) add(a->rhs, add);
    if (const auto* c = std::get_if<CondGoto>(&instr)) add(c->cond, add);
  }
  std::sort(out.begin(), out.end(),
            [](const Expr& a, const Expr& b) { return a.str() < b.str(); });
  return out;
}

}  // namespace

std::vector<Substitution> complete_substitutions(const Program& p, const CtlRef& formula,
                                                 const Substitution& base,
                                                 const std::map<std::string, std::vector<int>>& anchors,
                                                 PathSemantics mode) {
  std::map<std::string, MetaSort> metas;
  collect_metas(*formula, metas);

  // points first, then identifiers, then expressions; names sorted
  std::vector<std::pair<std::string, MetaSort>> order;
  for (auto sort : {MetaSort::Point, MetaSort::Var, MetaSort::Expr})
    for (const auto& [name, s] : metas)
      if (s == sort) order.emplace_back(name, s);

  std::vector<std::string> var_domain = p.all_vars();
  std::vector<Expr> expr_domain = program_subexprs(p);

  std::vector<Substitution> results;
  std::function<void(size_t, Substitution)> go = [&](size_t idx, Substitution theta) {
    if (idx == order.size()) {
      if (check_ctl_global(p, apply_substitution(formula, theta), mode))
        results.push_back(std::move(theta));
      return;
    }
    const auto& [name, sort] = order[idx];
    if (theta.bound(name)) {
      go(idx + 1, std::move(theta));
      return;
    }
    switch (sort) {
      case MetaSort::Point: {
        std::vector<int> points;
        auto it = anchors.find(name);
        if (it != anchors.end()) points = it->second;
        else
          for (int l = 1; l <= p.size(); ++l) points.push_back(l);
        for (int l : points) {
          Substitution t = theta;
          if (t.bind_point(name, l)) go(idx + 1, std::move(t));
        }
        break;
      }
      case MetaSort::Var:
        for (const auto& v : var_domain) {
          Substitution t = theta;
          if (t.bind_var(name, v)) go(idx + 1, std::move(t));
        }
        break;
      case MetaSort::Expr:
        for (const auto& e : expr_domain) {
          Substitution t = theta;
          if (t.bind_expr(name, e)) go(idx + 1, std::move(t));
        }
        break;
    }
  };
  go(0, base);

  std::sort(results.begin(), results.end(), subst_less);
  results.erase(std::unique(results.begin(), results.end()), results.end());
  return results;
}

std::vector<Substitution> find_substitutions(const Program& p, const CtlRef& formula,
                                             const std::map<std::string, std::vector<int>>& anchors,
                                             PathSemantics mode) {
  return complete_substitutions(p, formula, Substitution{}, anchors, mode);
}

// ---------------------------------------------------------------------------
// prefix text syntax

namespace {

struct SExpr {
  std::string atom;  // empty for lists
  bool quoted = false;
  std::vector<SExpr> items;
};

class SReader {
 public:
  explicit SReader(const std::string& text) : text_(text) {}

  SExpr read() {
    SExpr e = read_one();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError("trailing input in formula");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  SExpr read_one() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of formula");
    if (text_[pos_] == '(') {
      ++pos_;
      SExpr list;
      while (true) {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("missing ')'");
        if (text_[pos_] == ')') {
          ++pos_;
          return list;
        }
        list.items.push_back(read_one());
      }
    }
    if (text_[pos_] == '"') {
      ++pos_;
      size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
      if (pos_ >= text_.size()) throw SyntaxError("unterminated string");
      SExpr atom;
      atom.atom = text_.substr(start, pos_ - start);
      atom.quoted = true;
      ++pos_;
      return atom;
    }
    size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')')
      ++pos_;
    SExpr atom;
    atom.atom = text_.substr(start, pos_ - start);
    return atom;
  }

  const std::string& text_;
  size_t pos_ = 0;
};

VarTerm var_term_of(const SExpr& e) {
  if (e.atom.empty()) throw SyntaxError("expected a variable");
  if (e.atom[0] == '?') return MetaVar{e.atom.substr(1)};
  return e.atom;
}

PointTerm point_term_of(const SExpr& e) {
  if (e.atom.empty()) throw SyntaxError("expected a point");
  if (e.atom[0] == '?') return MetaVar{e.atom.substr(1)};
  return std::stoi(e.atom);
}

ExprTerm expr_term_of(const SExpr& e) {
  if (!e.atom.empty() && e.atom[0] == '?' && !e.quoted) return MetaVar{e.atom.substr(1)};
  return parse_expr(e.atom);
}

CtlRef formula_of(const SExpr& e);

CtlRef temporal_of(const std::string& op, const SExpr& e) {
  Dir dir = op.substr(0, 4) == "fwd-" ? Dir::Fwd : Dir::Bwd;
  std::string kind = op.substr(4);
  if (kind == "AX" || kind == "EX") {
    if (e.items.size() != 2) throw SyntaxError(op + " takes one formula");
    return ctl::next(dir, kind == "AX" ? Quant::All : Quant::Exists, formula_of(e.items[1]));
  }
  if (kind == "AU" || kind == "EU") {
    if (e.items.size() != 3) throw SyntaxError(op + " takes two formulas");
    return ctl::until(dir, kind == "AU" ? Quant::All : Quant::Exists, formula_of(e.items[1]),
                      formula_of(e.items[2]));
  }
  throw SyntaxError("unknown operator " + op);
}

CtlRef formula_of(const SExpr& e) {
  if (!e.atom.empty() || e.items.empty()) {
    if (e.atom == "true") return ctl::tru();
    throw SyntaxError("unknown formula atom '" + e.atom + "'");
  }
  const std::string& op = e.items[0].atom;
  auto arity = [&](size_t args) {
    if (e.items.size() != args + 1) throw SyntaxError(op + " arity mismatch");
  };
  if (op == "def") {
    arity(1);
    return ctl::def(var_term_of(e.items[1]));
  }
  if (op == "use") {
    arity(1);
    return ctl::use(var_term_of(e.items[1]));
  }
  if (op == "point") {
    arity(1);
    return ctl::point(point_term_of(e.items[1]));
  }
  if (op == "stmt") {
    arity(1);
    Instr instr = parse_instr(e.items[1].atom);
    if (const auto* a = std::get_if<Assign>(&instr))
      return ctl::stmt(PatAssign{a->target, ExprPat::exact(a->rhs)});
    if (const auto* c = std::get_if<CondGoto>(&instr))
      return ctl::stmt(PatCondGoto{ExprPat::exact(c->cond), c->target});
    if (const auto* g = std::get_if<Goto>(&instr)) return ctl::stmt(PatGoto{g->target});
    if (std::holds_alternative<Skip>(instr)) return ctl::stmt(PatSkip{});
    if (std::holds_alternative<Abort>(instr)) return ctl::stmt(PatAbort{});
    throw SyntaxError("stmt pattern cannot be in/out");
  }
  if (op == "trans") {
    arity(1);
    return ctl::trans(expr_term_of(e.items[1]));
  }
  if (op == "conlit") {
    arity(1);
    return ctl::conlit(expr_term_of(e.items[1]));
  }
  if (op == "freevar") {
    arity(2);
    return ctl::freevar(var_term_of(e.items[1]), expr_term_of(e.items[2]));
  }
  if (op == "not") {
    arity(1);
    return ctl::fnot(formula_of(e.items[1]));
  }
  if (op == "and" || op == "or") {
    std::vector<CtlRef> parts;
    for (size_t i = 1; i < e.items.size(); ++i) parts.push_back(formula_of(e.items[i]));
    return op == "and" ? ctl::fand(std::move(parts)) : ctl::forr(std::move(parts));
  }
  if (op == "at") {
    arity(2);
    return ctl::at(point_term_of(e.items[1]), formula_of(e.items[2]));
  }
  if (op == "is-live") {
    arity(1);
    return ctl::is_live(var_term_of(e.items[1]));
  }
  if (op == "urdef") {
    arity(2);
    return ctl::urdef(var_term_of(e.items[1]), point_term_of(e.items[2]));
  }
  if (op == "dominates") {
    arity(2);
    return ctl::dominates(point_term_of(e.items[1]), point_term_of(e.items[2]));
  }
  if (op.rfind("fwd-", 0) == 0 || op.rfind("bwd-", 0) == 0) return temporal_of(op, e);
  throw SyntaxError("unknown formula operator '" + op + "'");
}

}  // namespace

CtlRef parse_ctl(const std::string& text) { return formula_of(SReader(text).read()); }

}  // namespace osrlab
