#pragma once

#include <stdexcept>
#include <string>

#include "osrlab/program.hpp"

namespace osrlab {

class SyntaxError : public std::runtime_error {
 public:
  explicit SyntaxError(std::string msg, int line = 0)
      : std::runtime_error(std::move(msg)), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parse the line-oriented text format: one instruction per line,
/// `#` comments, blank lines ignored (neither consumes a point).
Program parse_program(const std::string& text);

/// Parse a single instruction (no comments, no trailing junk).
Instr parse_instr(const std::string& text);

/// Parse an expression.
Expr parse_expr(const std::string& text);

/// Canonical text: one instruction per line, single spaces, every binary
/// operation parenthesized. parse_program(print_program(p)) == p.
std::string print_program(const Program& p);

}  // namespace osrlab
