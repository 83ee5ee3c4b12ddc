// Parser for the symbol DSL.
//
// Grammar (EBNF):
//   symbol   := matrix | expr
//   matrix   := '[' row { ',' row } ']'
//   row      := '[' expr { ',' expr } ']'
//   expr     := term { ('+'|'-') term }
//   term     := factor { ('*'|'/') factor }
//   factor   := '-' factor | primary [ '^' posnumber ]
//   primary  := number | 'i' | 'x' | '(' expr ')' | call
//   call     := name '(' ... ')'
//   name     := abs | sign | exp | log1p | sin | cos | phi
//            |  div(a, b, floor)            -- division with declared floor
//            |  blaschke(a {, zero} ; expr) -- zeros: constant, Im > 0
//   number   := digits ['.' digits] [('e'|'E') ['+'|'-'] digits] ['i']
//
// Operations on constant operands are folded at parse time, so the printed
// canonical form re-parses to a structurally equal tree.
//
// After parsing, every expression is validated on a 10^4-node tangent grid:
// entries must evaluate finite, declared division floors must hold, and
// log1p/phi denominators must stay away from their singular points.

#pragma once

#include <stdexcept>
#include <string>

#include "meanwind/symbol.hpp"

namespace meanwind::symbolkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int col)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

// Thrown when parse-time grid validation fails (division floor violated,
// non-finite entry value, log1p too close to its branch point).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string msg, double at_x)
      : std::runtime_error(msg + " (at x = " + std::to_string(at_x) + ")"),
        at_x_(at_x) {}
  double at_x() const { return at_x_; }

 private:
  double at_x_;
};

SymbolSpec parse_symbol(const std::string& text);

// Parses a single scalar expression (no matrix layout, no validation pass).
ExprPtr parse_expression(const std::string& text);

}  // namespace meanwind::symbolkit
