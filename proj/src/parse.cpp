#include "osrlab/parse.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace osrlab {

namespace {

struct Token {
  enum Kind { Ident, Number, Op, LParen, RParen, AssignArrow, End } kind;
  std::string text;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  Lexer(const std::string& text, int line) : text_(text), line_(line) { advance(); }

  const Token& peek() const { return current_; }
  Token next() {
    Token t = current_;
    advance();
    return t;
  }
  int line() const { return line_; }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) {
      current_ = {Token::End, ""};
      return;
    }
    char c = text_[pos_];
    if (ident_start(c)) {
      size_t start = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      current_ = {Token::Ident, text_.substr(start, pos_ - start)};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      current_ = {Token::Number, text_.substr(start, pos_ - start)};
      return;
    }
    if (c == '(') {
      ++pos_;
      current_ = {Token::LParen, "("};
      return;
    }
    if (c == ')') {
      ++pos_;
      current_ = {Token::RParen, ")"};
      return;
    }
    if (c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
      pos_ += 2;
      current_ = {Token::AssignArrow, ":="};
      return;
    }
    for (const char* op : {"==", "!=", "<=", "<", "+", "-", "*"}) {
      size_t len = std::string(op).size();
      if (text_.compare(pos_, len, op) == 0) {
        pos_ += len;
        current_ = {Token::Op, op};
        return;
      }
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", line_);
  }

  const std::string& text_;
  int line_;
  size_t pos_ = 0;
  Token current_{Token::End, ""};
};

class ExprParser {
 public:
  explicit ExprParser(Lexer& lex) : lex_(lex) {}

  // comparison (lowest) < additive < multiplicative < unary/primary
  Expr parse() { return comparison(); }

 private:
  Expr comparison() {
    Expr left = additive();
    while (lex_.peek().kind == Token::Op) {
      const std::string& t = lex_.peek().text;
      BinOp op;
      if (t == "==") op = BinOp::Eq;
      else if (t == "!=") op = BinOp::Ne;
      else if (t == "<=") op = BinOp::Le;
      else if (t == "<") op = BinOp::Lt;
      else break;
      lex_.next();
      left = Expr::bin(op, std::move(left), additive());
    }
    return left;
  }

  Expr additive() {
    Expr left = multiplicative();
    while (lex_.peek().kind == Token::Op &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      BinOp op = lex_.next().text == "+" ? BinOp::Add : BinOp::Sub;
      left = Expr::bin(op, std::move(left), multiplicative());
    }
    return left;
  }

  Expr multiplicative() {
    Expr left = unary();
    while (lex_.peek().kind == Token::Op && lex_.peek().text == "*") {
      lex_.next();
      left = Expr::bin(BinOp::Mul, std::move(left), unary());
    }
    return left;
  }

  Expr unary() {
    if (lex_.peek().kind == Token::Op && lex_.peek().text == "-") {
      lex_.next();
      Expr inner = unary();
      if (inner.is_lit()) return Expr::lit(-inner.lit_value());
      return Expr::bin(BinOp::Sub, Expr::lit(0), std::move(inner));
    }
    return primary();
  }

  Expr primary() {
    Token t = lex_.next();
    switch (t.kind) {
      case Token::Number:
        return Expr::lit(Value(t.text));
      case Token::Ident:
        return Expr::var(t.text);
      case Token::LParen: {
        Expr inner = parse();
        if (lex_.next().kind != Token::RParen) throw SyntaxError("expected ')'", lex_.line());
        return inner;
      }
      default:
        throw SyntaxError("expected expression, got '" + t.text + "'", lex_.line());
    }
  }

  Lexer& lex_;
};

int parse_point(Lexer& lex) {
  Token t = lex.next();
  bool negative = false;
  if (t.kind == Token::Op && t.text == "-") {
    negative = true;
    t = lex.next();
  }
  if (t.kind != Token::Number) throw SyntaxError("expected instruction index", lex.line());
  int value = std::stoi(t.text);
  return negative ? -value : value;
}

std::vector<std::string> parse_var_list(Lexer& lex) {
  std::vector<std::string> vars;
  while (lex.peek().kind == Token::Ident) vars.push_back(lex.next().text);
  return vars;
}

Instr parse_instr_line(const std::string& line, int line_no) {
  Lexer lex(line, line_no);
  Token first = lex.peek();
  if (first.kind != Token::Ident) throw SyntaxError("expected instruction", line_no);

  Instr instr;
  if (first.text == "in") {
    lex.next();
    instr = In{parse_var_list(lex)};
  } else if (first.text == "out") {
    lex.next();
    instr = Out{parse_var_list(lex)};
  } else if (first.text == "skip") {
    lex.next();
    instr = Skip{};
  } else if (first.text == "abort") {
    lex.next();
    instr = Abort{};
  } else if (first.text == "goto") {
    lex.next();
    instr = Goto{parse_point(lex)};
  } else if (first.text == "if") {
    lex.next();
    if (lex.next().kind != Token::LParen) throw SyntaxError("expected '(' after if", line_no);
    Expr cond = ExprParser(lex).parse();
    if (lex.next().kind != Token::RParen) throw SyntaxError("expected ')'", line_no);
    Token kw = lex.next();
    if (kw.kind != Token::Ident || kw.text != "goto")
      throw SyntaxError("expected goto after condition", line_no);
    instr = CondGoto{std::move(cond), parse_point(lex)};
  } else {
    std::string target = lex.next().text;
    if (lex.next().kind != Token::AssignArrow)
      throw SyntaxError("expected ':=' in assignment", line_no);
    instr = Assign{std::move(target), ExprParser(lex).parse()};
  }
  if (lex.peek().kind != Token::End)
    throw SyntaxError("trailing input '" + lex.peek().text + "'", line_no);
  return instr;
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& line) {
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Instr parse_instr(const std::string& text) { return parse_instr_line(text, 0); }

Expr parse_expr(const std::string& text) {
  Lexer lex(text, 0);
  Expr e = ExprParser(lex).parse();
  if (lex.peek().kind != Token::End) throw SyntaxError("trailing input in expression", 0);
  return e;
}

Program parse_program(const std::string& text) {
  std::vector<Instr> instrs;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    std::string body = strip_comment(line);
    if (blank(body)) continue;
    instrs.push_back(parse_instr_line(body, line_no));
  }
  return Program::make(std::move(instrs));
}

std::string print_program(const Program& p) {
  std::string out;
  for (int i = 1; i <= p.size(); ++i) {
    if (i > 1) out += '\n';
    out += instr_str(p.at(i));
  }
  return out;
}

}  // namespace osrlab
