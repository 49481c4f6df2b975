#include "osrlab/program.hpp"

#include <algorithm>
#include <sstream>

namespace osrlab {

std::optional<std::string> assign_target(const Instr& instr) {
  if (const auto* a = std::get_if<Assign>(&instr)) return a->target;
  return std::nullopt;
}

std::set<std::string> defined_vars(const Instr& instr) {
  std::set<std::string> out;
  if (const auto* a = std::get_if<Assign>(&instr)) {
    out.insert(a->target);
  } else if (const auto* in = std::get_if<In>(&instr)) {
    out.insert(in->vars.begin(), in->vars.end());
  }
  return out;
}

std::set<std::string> used_vars(const Instr& instr) {
  if (const auto* a = std::get_if<Assign>(&instr)) return expr_vars(a->rhs);
  if (const auto* c = std::get_if<CondGoto>(&instr)) return expr_vars(c->cond);
  if (const auto* o = std::get_if<Out>(&instr)) return {o->vars.begin(), o->vars.end()};
  return {};
}

bool defines(const Instr& instr, const std::string& x) { return defined_vars(instr).count(x) != 0; }
bool uses(const Instr& instr, const std::string& x) { return used_vars(instr).count(x) != 0; }

std::optional<int> goto_target(const Instr& instr) {
  if (const auto* g = std::get_if<Goto>(&instr)) return g->target;
  if (const auto* c = std::get_if<CondGoto>(&instr)) return c->target;
  return std::nullopt;
}

Instr with_goto_target(const Instr& instr, int target) {
  if (const auto* g = std::get_if<Goto>(&instr)) {
    (void)g;
    return Goto{target};
  }
  if (const auto* c = std::get_if<CondGoto>(&instr)) return CondGoto{c->cond, target};
  return instr;
}

static std::string join_vars(const std::vector<std::string>& vars) {
  std::string out;
  for (const auto& v : vars) {
    out += ' ';
    out += v;
  }
  return out;
}

std::string instr_str(const Instr& instr) {
  struct Visitor {
    std::string operator()(const Assign& a) const { return a.target + " := " + a.rhs.str(); }
    std::string operator()(const CondGoto& c) const {
      std::string cond = c.cond.str();
      if (!c.cond.is_bin()) cond = "(" + cond + ")";
      return "if " + cond + " goto " + std::to_string(c.target);
    }
    std::string operator()(const Goto& g) const { return "goto " + std::to_string(g.target); }
    std::string operator()(const Skip&) const { return "skip"; }
    std::string operator()(const Abort&) const { return "abort"; }
    std::string operator()(const In& in) const { return "in" + join_vars(in.vars); }
    std::string operator()(const Out& out) const { return "out" + join_vars(out.vars); }
  };
  return std::visit(Visitor{}, instr);
}

static void check_dup_free(const std::vector<std::string>& vars, const char* what, int line) {
  std::set<std::string> seen;
  for (const auto& v : vars)
    if (!seen.insert(v).second)
      throw StructureError(std::string(what) + " list repeats variable " + v, line);
}

Program Program::make(std::vector<Instr> instrs) {
  const int n = static_cast<int>(instrs.size());
  if (n < 2) throw StructureError("program needs at least `in` and `out`");
  if (!std::holds_alternative<In>(instrs.front()))
    throw StructureError("first instruction must be `in`", 1);
  if (!std::holds_alternative<Out>(instrs.back()))
    throw StructureError("last instruction must be `out`", n);
  for (int i = 2; i <= n - 1; ++i) {
    const Instr& instr = instrs[static_cast<size_t>(i - 1)];
    if (std::holds_alternative<In>(instr))
      throw StructureError("`in` only allowed as the first instruction", i);
    if (std::holds_alternative<Out>(instr))
      throw StructureError("`out` only allowed as the last instruction", i);
  }
  check_dup_free(std::get<In>(instrs.front()).vars, "in", 1);
  check_dup_free(std::get<Out>(instrs.back()).vars, "out", n);
  for (int i = 1; i <= n; ++i) {
    if (auto t = goto_target(instrs[static_cast<size_t>(i - 1)])) {
      if (*t < 1 || *t > n)
        throw StructureError("goto target " + std::to_string(*t) + " out of range [1," +
                                 std::to_string(n) + "]",
                             i);
    }
  }
  return Program(std::move(instrs));
}

const std::vector<std::string>& Program::in_vars() const {
  return std::get<In>(instrs_.front()).vars;
}

const std::vector<std::string>& Program::out_vars() const {
  return std::get<Out>(instrs_.back()).vars;
}

std::vector<std::string> Program::all_vars() const {
  std::set<std::string> set;
  for (const Instr& instr : instrs_) {
    auto defs = defined_vars(instr);
    auto uses = used_vars(instr);
    set.insert(defs.begin(), defs.end());
    set.insert(uses.begin(), uses.end());
  }
  return {set.begin(), set.end()};
}

Program compose_programs(const Program& p, const Program& q) {
  std::set<std::string> provided(p.out_vars().begin(), p.out_vars().end());
  std::vector<std::string> missing;
  for (const auto& v : q.in_vars())
    if (!provided.count(v)) missing.push_back(v);
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "not composable, second program needs";
    for (const auto& v : missing) msg << ' ' << v;
    throw NotComposable(msg.str(), missing);
  }

  const int shift = p.size() - 2;
  std::vector<Instr> instrs;
  for (int i = 1; i <= p.size() - 1; ++i) instrs.push_back(p.at(i));
  for (int i = 2; i <= q.size(); ++i) {
    Instr instr = q.at(i);
    if (auto t = goto_target(instr)) instr = with_goto_target(instr, *t + shift);
    instrs.push_back(std::move(instr));
  }
  return Program::make(std::move(instrs));
}

}  // namespace osrlab
