#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "osrlab/expr.hpp"

namespace osrlab {

struct Assign {
  std::string target;
  Expr rhs;
  bool operator==(const Assign& o) const { return target == o.target && rhs == o.rhs; }
};
struct CondGoto {
  Expr cond;
  int target = 0;
  bool operator==(const CondGoto& o) const { return target == o.target && cond == o.cond; }
};
struct Goto {
  int target = 0;
  bool operator==(const Goto& o) const { return target == o.target; }
};
struct Skip {
  bool operator==(const Skip&) const { return true; }
};
struct Abort {
  bool operator==(const Abort&) const { return true; }
};
struct In {
  std::vector<std::string> vars;
  bool operator==(const In& o) const { return vars == o.vars; }
};
struct Out {
  std::vector<std::string> vars;
  bool operator==(const Out& o) const { return vars == o.vars; }
};

using Instr = std::variant<Assign, CondGoto, Goto, Skip, Abort, In, Out>;

/// Variable defined by the instruction, if any (assignment target; `in`
/// binds its whole list, reported via defined_vars).
std::optional<std::string> assign_target(const Instr& instr);
std::set<std::string> defined_vars(const Instr& instr);
std::set<std::string> used_vars(const Instr& instr);
bool defines(const Instr& instr, const std::string& x);
bool uses(const Instr& instr, const std::string& x);
std::optional<int> goto_target(const Instr& instr);
Instr with_goto_target(const Instr& instr, int target);
std::string instr_str(const Instr& instr);

class StructureError : public std::runtime_error {
 public:
  explicit StructureError(std::string msg, int line = 0)
      : std::runtime_error(std::move(msg)), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Instruction sequence with 1-based points: `in` first, `out` last,
/// goto targets in range, no other `in`/`out`.
class Program {
 public:
  Program() = default;
  static Program make(std::vector<Instr> instrs);

  int size() const { return static_cast<int>(instrs_.size()); }
  const Instr& at(int point) const { return instrs_.at(static_cast<size_t>(point - 1)); }
  const std::vector<Instr>& instrs() const { return instrs_; }

  const std::vector<std::string>& in_vars() const;
  const std::vector<std::string>& out_vars() const;

  /// All variable names occurring anywhere in the program, sorted.
  std::vector<std::string> all_vars() const;

  bool operator==(const Program& o) const { return instrs_ == o.instrs_; }
  bool operator!=(const Program& o) const { return !(*this == o); }

 private:
  explicit Program(std::vector<Instr> instrs) : instrs_(std::move(instrs)) {}
  std::vector<Instr> instrs_;
};

class NotComposable : public std::runtime_error {
 public:
  NotComposable(std::string msg, std::vector<std::string> missing)
      : std::runtime_error(std::move(msg)), missing_(std::move(missing)) {}
  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

/// Sequential composition: p's body followed by q's body, with q's goto
/// targets relocated by |p| - 2. Requires q's in-vars ⊆ p's out-vars.
Program compose_programs(const Program& p, const Program& q);

}  // namespace osrlab
