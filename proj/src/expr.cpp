#include "osrlab/expr.hpp"

namespace osrlab {

const char* bin_op_token(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
  }
  return "?";
}

Expr Expr::bin(BinOp op, Expr lhs, Expr rhs) {
  return Expr(Node(Bin{op, std::make_shared<const Expr>(std::move(lhs)),
                       std::make_shared<const Expr>(std::move(rhs))}));
}

bool Expr::operator==(const Expr& other) const {
  if (node_.index() != other.node_.index()) return false;
  if (is_lit()) return lit_value() == other.lit_value();
  if (is_var()) return var_name() == other.var_name();
  return op() == other.op() && lhs() == other.lhs() && rhs() == other.rhs();
}

std::string Expr::str() const {
  if (is_lit()) return lit_value().str();
  if (is_var()) return var_name();
  return "(" + lhs().str() + " " + bin_op_token(op()) + " " + rhs().str() + ")";
}

static void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.is_var()) {
    out.insert(e.var_name());
  } else if (e.is_bin()) {
    collect_vars(e.lhs(), out);
    collect_vars(e.rhs(), out);
  }
}

std::set<std::string> expr_vars(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

bool is_free_var(const std::string& x, const Expr& e) {
  if (e.is_var()) return e.var_name() == x;
  if (e.is_bin()) return is_free_var(x, e.lhs()) || is_free_var(x, e.rhs());
  return false;
}

Expr substitute_expr(const Expr& e, const Expr& from, const Expr& to) {
  if (e == from) return to;
  if (e.is_bin())
    return Expr::bin(e.op(), substitute_expr(e.lhs(), from, to),
                     substitute_expr(e.rhs(), from, to));
  return e;
}

bool contains_subexpr(const Expr& e, const Expr& needle) {
  if (e == needle) return true;
  if (e.is_bin()) return contains_subexpr(e.lhs(), needle) || contains_subexpr(e.rhs(), needle);
  return false;
}

}  // namespace osrlab
