#include "osrlab/interp.hpp"

namespace osrlab {

bool same_outcome_class(const RunOutcome& a, const RunOutcome& b) {
  return a.index() == b.index();
}

std::string outcome_str(const RunOutcome& outcome) {
  struct Visitor {
    std::string operator()(const Completed& c) const { return "Completed " + c.final.str(); }
    std::string operator()(const Aborted& a) const {
      return "Aborted at " + std::to_string(a.at);
    }
    std::string operator()(const UndefinedVar& u) const {
      return "UndefinedVar " + u.name + " at " + std::to_string(u.at);
    }
    std::string operator()(const InViolation& v) const { return "InViolation " + v.missing; }
    std::string operator()(const OutViolation& v) const { return "OutViolation " + v.missing; }
    std::string operator()(const FuelExhausted& f) const {
      return "FuelExhausted " + std::to_string(f.after);
    }
  };
  return std::visit(Visitor{}, outcome);
}

Value eval_expr(const Store& store, const Expr& e) {
  if (e.is_lit()) return e.lit_value();
  if (e.is_var()) {
    auto v = store.get(e.var_name());
    if (!v) throw EvalError(e.var_name());
    return *v;
  }
  Value l = eval_expr(store, e.lhs());
  Value r = eval_expr(store, e.rhs());
  switch (e.op()) {
    case BinOp::Add: return l + r;
    case BinOp::Sub: return l - r;
    case BinOp::Mul: return l * r;
    case BinOp::Eq: return Value(l == r ? 1 : 0);
    case BinOp::Ne: return Value(l != r ? 1 : 0);
    case BinOp::Lt: return Value(l < r ? 1 : 0);
    case BinOp::Le: return Value(l <= r ? 1 : 0);
  }
  return Value(0);
}

StepResult step(const Program& p, const ProgState& s) {
  const Instr& instr = p.at(s.point);
  try {
    if (const auto* a = std::get_if<Assign>(&instr)) {
      Value v = eval_expr(s.store, a->rhs);
      ProgState next{s.store, s.point + 1};
      next.store.set(a->target, std::move(v));
      return next;
    }
    if (const auto* g = std::get_if<Goto>(&instr)) return ProgState{s.store, g->target};
    if (std::holds_alternative<Skip>(instr)) return ProgState{s.store, s.point + 1};
    if (const auto* c = std::get_if<CondGoto>(&instr)) {
      Value v = eval_expr(s.store, c->cond);
      if (v == 0) return ProgState{s.store, s.point + 1};
      return ProgState{s.store, c->target};
    }
    if (std::holds_alternative<Abort>(instr)) return RunOutcome(Aborted{s.point});
    if (const auto* in = std::get_if<In>(&instr)) {
      for (const auto& x : in->vars)
        if (!s.store.defined(x)) return RunOutcome(InViolation{x});
      return ProgState{s.store, s.point + 1};
    }
    const auto& out = std::get<Out>(instr);
    for (const auto& x : out.vars)
      if (!s.store.defined(x)) return RunOutcome(OutViolation{x});
    std::set<std::string> keep(out.vars.begin(), out.vars.end());
    return ProgState{s.store.restricted(keep), s.point + 1};
  } catch (const EvalError& e) {
    return RunOutcome(UndefinedVar{e.name(), s.point});
  }
}

RunOutcome run(const Program& p, const Store& store, std::int64_t fuel) {
  ProgState state{store, 1};
  for (std::int64_t used = 0; used < fuel; ++used) {
    StepResult next = step(p, state);
    if (auto* outcome = std::get_if<RunOutcome>(&next)) return *outcome;
    state = std::move(std::get<ProgState>(next));
    if (state.point == p.size() + 1) return Completed{state.store};
  }
  return FuelExhausted{fuel};
}

Trace trace(const Program& p, const Store& store, std::int64_t fuel) {
  Trace t;
  t.states.push_back(ProgState{store, 1});
  for (std::int64_t used = 0; used < fuel; ++used) {
    StepResult next = step(p, t.states.back());
    if (auto* outcome = std::get_if<RunOutcome>(&next)) {
      t.outcome = *outcome;
      return t;
    }
    t.states.push_back(std::move(std::get<ProgState>(next)));
    if (t.states.back().point == p.size() + 1) {
      t.outcome = Completed{t.states.back().store};
      return t;
    }
  }
  t.outcome = FuelExhausted{fuel};
  return t;
}

}  // namespace osrlab
