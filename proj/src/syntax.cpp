// Copyright 2026 The EPike Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "epike/syntax.hpp"

#include <cctype>

#include "epike/errors.hpp"

namespace epike {

namespace {

bool is_ident_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '-' ||
         ch == ':';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char ch) {
    if (peek() == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char ch) {
    if (!accept(ch)) fail(std::string("expected '") + ch + "'");
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }
  // Identifier lookahead without consuming.
  std::string peek_ident() {
    skip_ws();
    std::size_t p = pos_;
    while (p < text_.size() && is_ident_char(text_[p])) ++p;
    return std::string(text_.substr(pos_, p - pos_));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) +
                     "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

// --- constraints -----------------------------------------------------------

Constraint constraint_expr(Lexer& lx);

Constraint constraint_primary(Lexer& lx) {
  if (lx.accept('!')) return Constraint::negation(constraint_primary(lx));
  if (lx.accept('(')) {
    Constraint inner = constraint_expr(lx);
    lx.expect(')');
    return inner;
  }
  std::string name = lx.ident();
  if (name == "true") return Constraint::top();
  if (name == "false") return Constraint::bottom();
  lx.expect('=');
  return Constraint::assign(std::move(name), lx.ident());
}

Constraint constraint_expr(Lexer& lx) {
  std::vector<Constraint> ops{constraint_primary(lx)};
  char op = '\0';
  while (lx.peek() == '&' || lx.peek() == '|') {
    char next = lx.peek();
    if (op != '\0' && next != op) lx.fail("mixed '&' and '|' need parentheses");
    op = next;
    lx.accept(next);
    ops.push_back(constraint_primary(lx));
  }
  if (ops.size() == 1) return ops.front();
  return op == '&' ? Constraint::conjunction(std::move(ops))
                   : Constraint::disjunction(std::move(ops));
}

void print_constraint(const Constraint& c, bool bare, std::string& out) {
  switch (c.kind()) {
    case Constraint::Kind::Top:
      out += "true";
      return;
    case Constraint::Kind::Bottom:
      out += "false";
      return;
    case Constraint::Kind::Assign:
      out += c.variable();
      out += '=';
      out += c.value();
      return;
    case Constraint::Kind::Not: {
      const Constraint& op = c.operands()[0];
      out += '!';
      bool grouped = op.kind() == Constraint::Kind::And || op.kind() == Constraint::Kind::Or;
      if (!grouped) out += '(';
      print_constraint(op, false, out);
      if (!grouped) out += ')';
      return;
    }
    case Constraint::Kind::And:
    case Constraint::Kind::Or: {
      const char* sep = c.kind() == Constraint::Kind::And ? " & " : " | ";
      if (!bare) out += '(';
      bool first = true;
      for (const auto& op : c.operands()) {
        if (!first) out += sep;
        first = false;
        print_constraint(op, false, out);
      }
      if (!bare) out += ')';
      return;
    }
  }
}

// --- formulas ----------------------------------------------------------------

Formula formula_expr(Lexer& lx);

Constraint constraint_argument(Lexer& lx) {
  lx.expect('(');
  Constraint c = constraint_expr(lx);
  lx.expect(')');
  return c;
}

Formula formula_primary(Lexer& lx) {
  if (lx.accept('!')) return Formula::negation(formula_primary(lx));
  if (lx.accept('(')) {
    Formula inner = formula_expr(lx);
    lx.expect(')');
    return inner;
  }
  std::string word = lx.ident();
  if (word == "in") return Formula::in(constraint_argument(lx));
  if (word == "entailed") return Formula::entailed(constraint_argument(lx));
  if (word == "sat") return Formula::sat(constraint_argument(lx));
  if (word == "suc") return Formula::success();
  if (word == "true") return Formula::top();
  if (word == "false") return Formula::bottom();
  if (word == "B") {
    lx.expect('[');
    std::string agent = lx.ident();
    Formula condition = Formula::top();
    if (lx.accept('|')) condition = formula_expr(lx);
    lx.expect(']');
    lx.expect('(');
    Formula body = formula_expr(lx);
    lx.expect(')');
    return Formula::conditional_belief(std::move(agent), std::move(condition), std::move(body));
  }
  lx.fail("unknown formula keyword '" + word + "'");
}

Formula formula_expr(Lexer& lx) {
  std::vector<Formula> ops{formula_primary(lx)};
  char op = '\0';
  while (lx.peek() == '&' || lx.peek() == '|') {
    char next = lx.peek();
    if (op != '\0' && next != op) lx.fail("mixed '&' and '|' need parentheses");
    op = next;
    lx.accept(next);
    ops.push_back(formula_primary(lx));
  }
  if (ops.size() == 1) return ops.front();
  return op == '&' ? Formula::conjunction(std::move(ops)) : Formula::disjunction(std::move(ops));
}

void print_formula(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::In:
      out += "in(";
      print_constraint(f.constraint(), true, out);
      out += ')';
      return;
    case Formula::Kind::Entailed:
      out += "entailed(";
      print_constraint(f.constraint(), true, out);
      out += ')';
      return;
    case Formula::Kind::Success:
      out += "suc";
      return;
    case Formula::Kind::Not: {
      Constraint inner;
      if (f.is_sat(&inner)) {
        out += "sat(";
        print_constraint(inner, true, out);
        out += ')';
        return;
      }
      out += '!';
      print_formula(f.operands()[0], out);
      return;
    }
    case Formula::Kind::And: {
      out += '(';
      bool first = true;
      for (const auto& op : f.operands()) {
        if (!first) out += " & ";
        first = false;
        print_formula(op, out);
      }
      out += ')';
      return;
    }
    case Formula::Kind::Belief:
      out += "B[";
      out += f.agent();
      if (!f.condition().is_top()) {
        out += " | ";
        print_formula(f.condition(), out);
      }
      out += "](";
      print_formula(f.body(), out);
      out += ')';
      return;
  }
}

}  // namespace

Constraint parse_constraint(std::string_view text) {
  Lexer lx(text);
  Constraint c = constraint_expr(lx);
  if (!lx.at_end()) lx.fail("trailing input");
  return c;
}

std::string to_string(const Constraint& c) {
  std::string out;
  print_constraint(c, false, out);
  return out;
}

Formula parse_formula(std::string_view text) {
  Lexer lx(text);
  Formula f = formula_expr(lx);
  if (!lx.at_end()) lx.fail("trailing input");
  return f;
}

std::string to_string(const Formula& f) {
  std::string out;
  print_formula(f, out);
  return out;
}

}  // namespace epike
