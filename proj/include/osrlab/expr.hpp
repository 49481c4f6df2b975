#pragma once

#include <memory>
#include <set>
#include <string>
#include <variant>

#include "osrlab/value.hpp"

namespace osrlab {

enum class BinOp { Add, Sub, Mul, Eq, Ne, Lt, Le };

const char* bin_op_token(BinOp op);

/// Immutable expression tree: integer literal, variable reference, or
/// binary operation. Copies are cheap (shared subtrees).
class Expr {
 public:
  Expr() : node_(Value(0)) {}

  static Expr lit(Value v) { return Expr(Node(std::move(v))); }
  static Expr lit(long long v) { return Expr(Node(Value(v))); }
  static Expr var(std::string name) { return Expr(Node(std::move(name))); }
  static Expr bin(BinOp op, Expr lhs, Expr rhs);

  bool is_lit() const { return std::holds_alternative<Value>(node_); }
  bool is_var() const { return std::holds_alternative<std::string>(node_); }
  bool is_bin() const { return std::holds_alternative<Bin>(node_); }

  const Value& lit_value() const { return std::get<Value>(node_); }
  const std::string& var_name() const { return std::get<std::string>(node_); }
  BinOp op() const { return std::get<Bin>(node_).op; }
  const Expr& lhs() const { return *std::get<Bin>(node_).lhs; }
  const Expr& rhs() const { return *std::get<Bin>(node_).rhs; }

  bool operator==(const Expr& other) const;
  bool operator!=(const Expr& other) const { return !(*this == other); }

  /// Canonical text form; every binary operation is parenthesized.
  std::string str() const;

 private:
  struct Bin {
    BinOp op;
    std::shared_ptr<const Expr> lhs;
    std::shared_ptr<const Expr> rhs;
  };
  using Node = std::variant<Value, std::string, Bin>;

  explicit Expr(Node node) : node_(std::move(node)) {}

  Node node_;
};

/// Set of variable names occurring in e.
std::set<std::string> expr_vars(const Expr& e);

/// True iff x occurs free in e (all occurrences are free here).
bool is_free_var(const std::string& x, const Expr& e);

/// True iff e is a constant literal.
inline bool is_const_lit(const Expr& e) { return e.is_lit(); }

/// e with every occurrence of the subexpression `from` replaced by `to`.
Expr substitute_expr(const Expr& e, const Expr& from, const Expr& to);

/// True iff `needle` occurs as a subexpression of e.
bool contains_subexpr(const Expr& e, const Expr& needle);

}  // namespace osrlab
