#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "osrlab/program.hpp"
#include "osrlab/store.hpp"

namespace osrlab {

struct ProgState {
  Store store;
  int point = 1;
  bool operator==(const ProgState& o) const { return point == o.point && store == o.store; }
};

struct Completed {
  Store final;
  bool operator==(const Completed& o) const { return final == o.final; }
};
struct Aborted {
  int at = 0;
  bool operator==(const Aborted& o) const { return at == o.at; }
};
struct UndefinedVar {
  std::string name;
  int at = 0;
  bool operator==(const UndefinedVar& o) const { return name == o.name && at == o.at; }
};
struct InViolation {
  std::string missing;
  bool operator==(const InViolation& o) const { return missing == o.missing; }
};
struct OutViolation {
  std::string missing;
  bool operator==(const OutViolation& o) const { return missing == o.missing; }
};
struct FuelExhausted {
  std::int64_t after = 0;
  bool operator==(const FuelExhausted& o) const { return after == o.after; }
};

using RunOutcome =
    std::variant<Completed, Aborted, UndefinedVar, InViolation, OutViolation, FuelExhausted>;

bool same_outcome_class(const RunOutcome& a, const RunOutcome& b);
std::string outcome_str(const RunOutcome& outcome);

/// Thrown by eval_expr when an operand variable is unbound.
class EvalError : public std::runtime_error {
 public:
  explicit EvalError(std::string name)
      : std::runtime_error("undefined variable " + name), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Evaluate e in σ; comparisons yield 1/0. Throws EvalError on unbound vars.
Value eval_expr(const Store& store, const Expr& e);

/// One transition from s (s.point in [1,n]). Either the successor state
/// (point n+1 after `out`, with the store restricted to the out list) or
/// a terminal failure.
using StepResult = std::variant<ProgState, RunOutcome>;
StepResult step(const Program& p, const ProgState& s);

/// Iterate step from (σ,1); Completed iff point n+1 is reached within fuel.
RunOutcome run(const Program& p, const Store& store, std::int64_t fuel);

struct Trace {
  std::vector<ProgState> states;
  RunOutcome outcome = FuelExhausted{0};
};

/// Full state sequence of run (deterministic for fixed inputs).
Trace trace(const Program& p, const Store& store, std::int64_t fuel);

}  // namespace osrlab
