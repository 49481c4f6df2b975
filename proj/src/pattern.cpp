#include "osrlab/pattern.hpp"

#include <algorithm>

namespace osrlab {

std::optional<int> Substitution::point(const std::string& meta) const {
  auto it = map_.find(meta);
  if (it == map_.end()) return std::nullopt;
  if (const int* v = std::get_if<int>(&it->second)) return *v;
  return std::nullopt;
}

std::optional<std::string> Substitution::var(const std::string& meta) const {
  auto it = map_.find(meta);
  if (it == map_.end()) return std::nullopt;
  if (const std::string* v = std::get_if<std::string>(&it->second)) return *v;
  return std::nullopt;
}

std::optional<Expr> Substitution::expr(const std::string& meta) const {
  auto it = map_.find(meta);
  if (it == map_.end()) return std::nullopt;
  if (const Expr* v = std::get_if<Expr>(&it->second)) return *v;
  // identifier metas double as variable expressions where an Expr is needed
  if (const std::string* v = std::get_if<std::string>(&it->second)) return Expr::var(*v);
  return std::nullopt;
}

bool Substitution::bind_point(const std::string& meta, int value) {
  auto it = map_.find(meta);
  if (it == map_.end()) {
    map_.emplace(meta, value);
    return true;
  }
  const int* old = std::get_if<int>(&it->second);
  return old && *old == value;
}

bool Substitution::bind_var(const std::string& meta, const std::string& value) {
  auto it = map_.find(meta);
  if (it == map_.end()) {
    map_.emplace(meta, value);
    return true;
  }
  const std::string* old = std::get_if<std::string>(&it->second);
  return old && *old == value;
}

bool Substitution::bind_expr(const std::string& meta, const Expr& value) {
  auto it = map_.find(meta);
  if (it == map_.end()) {
    map_.emplace(meta, value);
    return true;
  }
  if (const Expr* old = std::get_if<Expr>(&it->second)) return *old == value;
  if (const std::string* old = std::get_if<std::string>(&it->second))
    return value.is_var() && value.var_name() == *old;
  return false;
}

std::string Substitution::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, binding] : map_) {
    if (!first) out += ", ";
    first = false;
    out += name + "->";
    if (const int* p = std::get_if<int>(&binding)) out += std::to_string(*p);
    else if (const std::string* v = std::get_if<std::string>(&binding)) out += *v;
    else out += std::get<Expr>(binding).str();
  }
  return out + "}";
}

bool Substitution::operator==(const Substitution& o) const {
  if (map_.size() != o.map_.size()) return false;
  auto it = o.map_.begin();
  for (const auto& [name, binding] : map_) {
    if (name != it->first) return false;
    if (binding.index() != it->second.index()) return false;
    if (const int* p = std::get_if<int>(&binding)) {
      if (*p != std::get<int>(it->second)) return false;
    } else if (const std::string* v = std::get_if<std::string>(&binding)) {
      if (*v != std::get<std::string>(it->second)) return false;
    } else if (std::get<Expr>(binding) != std::get<Expr>(it->second)) {
      return false;
    }
    ++it;
  }
  return true;
}

bool subst_less(const Substitution& a, const Substitution& b) {
  auto ai = a.bindings().begin(), bi = b.bindings().begin();
  for (; ai != a.bindings().end() && bi != b.bindings().end(); ++ai, ++bi) {
    if (ai->first != bi->first) return ai->first < bi->first;
    const int* ap = std::get_if<int>(&ai->second);
    const int* bp = std::get_if<int>(&bi->second);
    if (ap && bp) {
      if (*ap != *bp) return *ap < *bp;
      continue;
    }
    auto text = [](const Substitution::Binding& binding) {
      if (const int* p = std::get_if<int>(&binding)) return std::to_string(*p);
      if (const std::string* v = std::get_if<std::string>(&binding)) return *v;
      return std::get<Expr>(binding).str();
    };
    std::string at = text(ai->second), bt = text(bi->second);
    if (at != bt) return at < bt;
  }
  return a.bindings().size() < b.bindings().size();
}

std::optional<std::string> resolve_var(const VarTerm& t, const Substitution& theta) {
  if (const std::string* v = std::get_if<std::string>(&t)) return *v;
  return theta.var(std::get<MetaVar>(t).name);
}

std::optional<int> resolve_point(const PointTerm& t, const Substitution& theta) {
  if (const int* v = std::get_if<int>(&t)) return *v;
  return theta.point(std::get<MetaVar>(t).name);
}

std::optional<Expr> resolve_expr(const ExprTerm& t, const Substitution& theta) {
  if (const Expr* v = std::get_if<Expr>(&t)) return *v;
  return theta.expr(std::get<MetaVar>(t).name);
}

namespace {

bool match_var(const VarTerm& t, const std::string& value, Substitution& theta) {
  if (const std::string* v = std::get_if<std::string>(&t)) return *v == value;
  return theta.bind_var(std::get<MetaVar>(t).name, value);
}

bool match_point(const PointTerm& t, int value, Substitution& theta) {
  if (const int* v = std::get_if<int>(&t)) return *v == value;
  return theta.bind_point(std::get<MetaVar>(t).name, value);
}

// Extensions of theta matching an expression pattern against e.
std::vector<Substitution> match_expr(const ExprPat& pat, const Expr& e,
                                     const Substitution& theta) {
  std::vector<Substitution> out;
  if (pat.concrete) {
    if (*pat.concrete == e) out.push_back(theta);
    return out;
  }
  if (pat.subst_from) {
    // right-hand-side form; match by instantiating and comparing
    Substitution t = theta;
    auto base = t.expr(*pat.meta);
    auto from = resolve_var(*pat.subst_from, t);
    auto to = resolve_expr(*pat.subst_to, t);
    if (base && from && to) {
      if (substitute_expr(*base, Expr::var(*from), *to) == e) out.push_back(std::move(t));
    }
    return out;
  }
  if (pat.focus) {
    auto vars = expr_vars(e);
    if (const std::string* fixed = std::get_if<std::string>(&*pat.focus)) {
      if (!vars.count(*fixed)) return out;
      Substitution t = theta;
      if (t.bind_expr(*pat.meta, e)) out.push_back(std::move(t));
      return out;
    }
    const std::string& meta = std::get<MetaVar>(*pat.focus).name;
    if (auto bound = theta.var(meta)) {
      if (!vars.count(*bound)) return out;
      Substitution t = theta;
      if (t.bind_expr(*pat.meta, e)) out.push_back(std::move(t));
      return out;
    }
    for (const auto& v : vars) {  // one branch per occurring variable
      Substitution t = theta;
      if (t.bind_var(meta, v) && t.bind_expr(*pat.meta, e)) out.push_back(std::move(t));
    }
    return out;
  }
  Substitution t = theta;
  if (t.bind_expr(*pat.meta, e)) out.push_back(std::move(t));
  return out;
}

}  // namespace

std::vector<Substitution> match_instr(const InstrPat& pat, const Instr& instr,
                                      const Substitution& theta) {
  std::vector<Substitution> out;
  if (const auto* pa = std::get_if<PatAssign>(&pat)) {
    const auto* a = std::get_if<Assign>(&instr);
    if (!a) return out;
    Substitution t = theta;
    if (!match_var(pa->target, a->target, t)) return out;
    return match_expr(pa->rhs, a->rhs, t);
  }
  if (const auto* pc = std::get_if<PatCondGoto>(&pat)) {
    const auto* c = std::get_if<CondGoto>(&instr);
    if (!c) return out;
    Substitution t = theta;
    if (!match_point(pc->target, c->target, t)) return out;
    return match_expr(pc->cond, c->cond, t);
  }
  if (const auto* pg = std::get_if<PatGoto>(&pat)) {
    const auto* g = std::get_if<Goto>(&instr);
    if (!g) return out;
    Substitution t = theta;
    if (match_point(pg->target, g->target, t)) out.push_back(std::move(t));
    return out;
  }
  if (std::holds_alternative<PatSkip>(pat)) {
    if (std::holds_alternative<Skip>(instr)) out.push_back(theta);
    return out;
  }
  if (std::holds_alternative<Abort>(instr)) out.push_back(theta);
  return out;
}

namespace {

Expr instantiate_expr(const ExprPat& pat, const Substitution& theta) {
  if (pat.concrete) return *pat.concrete;
  auto base = theta.expr(*pat.meta);
  if (!base) throw UnboundMetaVariable(*pat.meta);
  if (pat.subst_from) {
    auto from = resolve_var(*pat.subst_from, theta);
    if (!from) throw UnboundMetaVariable("subst source");
    auto to = resolve_expr(*pat.subst_to, theta);
    if (!to) throw UnboundMetaVariable("subst replacement");
    return substitute_expr(*base, Expr::var(*from), *to);
  }
  return *base;
}

}  // namespace

Instr instantiate_instr(const InstrPat& pat, const Substitution& theta) {
  if (const auto* pa = std::get_if<PatAssign>(&pat)) {
    auto target = resolve_var(pa->target, theta);
    if (!target) throw UnboundMetaVariable("assignment target");
    return Assign{*target, instantiate_expr(pa->rhs, theta)};
  }
  if (const auto* pc = std::get_if<PatCondGoto>(&pat)) {
    auto target = resolve_point(pc->target, theta);
    if (!target) throw UnboundMetaVariable("goto target");
    return CondGoto{instantiate_expr(pc->cond, theta), *target};
  }
  if (const auto* pg = std::get_if<PatGoto>(&pat)) {
    auto target = resolve_point(pg->target, theta);
    if (!target) throw UnboundMetaVariable("goto target");
    return Goto{*target};
  }
  if (std::holds_alternative<PatSkip>(pat)) return Skip{};
  return Abort{};
}

}  // namespace osrlab
