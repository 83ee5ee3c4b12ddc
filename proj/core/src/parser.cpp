#include "meanwind/parser.hpp"

#include <cctype>
#include <cmath>
#include <optional>

namespace meanwind::symbolkit {

namespace {

struct Cursor {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Cursor(const std::string& s) : src(s) {}

  bool eof() const { return pos >= src.size(); }
  char peek() const { return eof() ? '\0' : src[pos]; }

  char advance() {
    const char c = src[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void skip_ws() {
    while (!eof() && (std::isspace(static_cast<unsigned char>(peek())) != 0)) advance();
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

  bool consume(char c) {
    skip_ws();
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!consume(c)) fail(std::string("expected '") + c + "' " + what);
  }
};

bool is_constant(const ExprPtr& e) { return e->kind == ExprKind::Constant; }

// Constant folding keeps the printed canonical form re-parseable to a
// structurally equal tree. Division folds only when the declared floor holds.
ExprPtr fold_unary(ExprKind kind, ExprPtr arg, double exponent, Cursor& cur) {
  if (is_constant(arg)) {
    Expr tmp;
    tmp.kind = kind;
    tmp.exponent = exponent;
    tmp.lhs = arg;
    if (kind == ExprKind::Phi &&
        std::abs(arg->constant + Complex(0.0, 1.0)) < kDefaultDenominatorFloor)
      cur.fail("phi: constant argument too close to -i");
    if (kind == ExprKind::Log1p &&
        std::abs(Complex(1.0, 0.0) + arg->constant) < kDefaultDenominatorFloor)
      cur.fail("log1p: constant argument too close to -1");
    return make_constant(eval(tmp, Complex(0.0, 0.0)));
  }
  if (kind == ExprKind::Power) return make_power(std::move(arg), exponent);
  return make_unary(kind, std::move(arg));
}

ExprPtr fold_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs, double div_floor,
                    Cursor& cur) {
  if (is_constant(lhs) && is_constant(rhs)) {
    if (kind == ExprKind::Div && std::abs(rhs->constant) < div_floor)
      cur.fail("division by a constant below the declared floor");
    Expr tmp;
    tmp.kind = kind;
    tmp.lhs = lhs;
    tmp.rhs = rhs;
    return make_constant(eval(tmp, Complex(0.0, 0.0)));
  }
  return make_binary(kind, std::move(lhs), std::move(rhs), div_floor);
}

class Parser {
 public:
  explicit Parser(const std::string& text) : cur_(text) {}

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      cur_.skip_ws();
      if (cur_.peek() == '+') {
        cur_.advance();
        lhs = fold_binary(ExprKind::Add, std::move(lhs), parse_term(), 0.0, cur_);
      } else if (cur_.peek() == '-') {
        cur_.advance();
        lhs = fold_binary(ExprKind::Sub, std::move(lhs), parse_term(), 0.0, cur_);
      } else {
        return lhs;
      }
    }
  }

  std::vector<std::vector<ExprPtr>> parse_matrix() {
    std::vector<std::vector<ExprPtr>> rows;
    cur_.expect('[', "to open the matrix");
    for (;;) {
      rows.push_back(parse_row());
      if (!cur_.consume(',')) break;
    }
    cur_.expect(']', "to close the matrix");
    return rows;
  }

  bool at_matrix() {
    cur_.skip_ws();
    return cur_.peek() == '[';
  }

  void expect_end() {
    cur_.skip_ws();
    if (!cur_.eof()) cur_.fail("trailing input after expression");
  }

  Cursor& cursor() { return cur_; }

 private:
  Cursor cur_;

  std::vector<ExprPtr> parse_row() {
    std::vector<ExprPtr> row;
    cur_.expect('[', "to open a matrix row");
    for (;;) {
      row.push_back(parse_expr());
      if (!cur_.consume(',')) break;
    }
    cur_.expect(']', "to close a matrix row");
    return row;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      cur_.skip_ws();
      if (cur_.peek() == '*') {
        cur_.advance();
        lhs = fold_binary(ExprKind::Mul, std::move(lhs), parse_factor(), 0.0, cur_);
      } else if (cur_.peek() == '/') {
        cur_.advance();
        lhs = fold_binary(ExprKind::Div, std::move(lhs), parse_factor(),
                          kDefaultDenominatorFloor, cur_);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_factor() {
    cur_.skip_ws();
    if (cur_.peek() == '-') {
      cur_.advance();
      ExprPtr arg = parse_factor();
      if (is_constant(arg)) return make_constant(-arg->constant);
      return make_unary(ExprKind::Negate, std::move(arg));
    }
    ExprPtr base = parse_primary();
    cur_.skip_ws();
    if (cur_.peek() == '^') {
      cur_.advance();
      const double alpha = parse_positive_number();
      return fold_unary(ExprKind::Power, std::move(base), alpha, cur_);
    }
    return base;
  }

  ExprPtr parse_primary() {
    cur_.skip_ws();
    if (cur_.eof()) cur_.fail("unexpected end of input");
    const char c = cur_.peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      cur_.advance();
      ExprPtr e = parse_expr();
      cur_.expect(')', "to close the group");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
    cur_.fail(std::string("unexpected character '") + c + "'");
  }

  double parse_positive_number() {
    cur_.skip_ws();
    const int line = cur_.line, col = cur_.col;
    ExprPtr n = parse_number();
    if (n->constant.imag() != 0.0 || !(n->constant.real() > 0.0))
      throw ParseError("exponent must be a positive real literal", line, col);
    return n->constant.real();
  }

  ExprPtr parse_number() {
    cur_.skip_ws();
    size_t start = cur_.pos;
    const int line = cur_.line, col = cur_.col;
    while (!cur_.eof() && (std::isdigit(static_cast<unsigned char>(cur_.peek())) ||
                           cur_.peek() == '.'))
      cur_.advance();
    if (!cur_.eof() && (cur_.peek() == 'e' || cur_.peek() == 'E')) {
      // Lookahead: accept exponent only if followed by digits or a sign.
      const size_t save_pos = cur_.pos;
      const int save_line = cur_.line, save_col = cur_.col;
      cur_.advance();
      if (!cur_.eof() && (cur_.peek() == '+' || cur_.peek() == '-')) cur_.advance();
      if (!cur_.eof() && std::isdigit(static_cast<unsigned char>(cur_.peek()))) {
        while (!cur_.eof() && std::isdigit(static_cast<unsigned char>(cur_.peek())))
          cur_.advance();
      } else {
        // 'e...' was not an exponent; leave it for the caller
        cur_.pos = save_pos;
        cur_.line = save_line;
        cur_.col = save_col;
      }
    }
    const std::string tok = cur_.src.substr(start, cur_.pos - start);
    if (tok.empty() || tok == ".") throw ParseError("malformed number", line, col);
    double value = 0.0;
    size_t used = 0;
    try {
      value = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ParseError("malformed number '" + tok + "'", line, col);
    }
    if (used != tok.size()) throw ParseError("malformed number '" + tok + "'", line, col);
    if (!std::isfinite(value)) throw ParseError("number out of range", line, col);
    if (!cur_.eof() && cur_.peek() == 'i') {
      cur_.advance();
      return make_constant(Complex(0.0, value));
    }
    return make_constant(Complex(value, 0.0));
  }

  ExprPtr parse_name() {
    cur_.skip_ws();
    const int line = cur_.line, col = cur_.col;
    std::string name;
    while (!cur_.eof() && (std::isalnum(static_cast<unsigned char>(cur_.peek())) != 0))
      name += cur_.advance();

    if (name == "x") return make_variable();
    if (name == "i") return make_constant(Complex(0.0, 1.0));
    if (name == "pi") return make_constant(Complex(3.14159265358979323846, 0.0));

    static const std::vector<std::pair<std::string, ExprKind>> unary = {
        {"abs", ExprKind::Abs}, {"sign", ExprKind::Sign}, {"exp", ExprKind::Exp},
        {"log1p", ExprKind::Log1p}, {"sin", ExprKind::Sin}, {"cos", ExprKind::Cos},
        {"phi", ExprKind::Phi},
    };
    for (const auto& [fname, kind] : unary) {
      if (name == fname) {
        cur_.expect('(', "after function name");
        ExprPtr arg = parse_expr();
        cur_.expect(')', "to close the call");
        return fold_unary(kind, std::move(arg), 0.0, cur_);
      }
    }
    if (name == "div") {
      cur_.expect('(', "after div");
      ExprPtr a = parse_expr();
      cur_.expect(',', "between div arguments");
      ExprPtr b = parse_expr();
      cur_.expect(',', "before the declared floor");
      ExprPtr f = parse_expr();
      cur_.expect(')', "to close div");
      if (!is_constant(f) || f->constant.imag() != 0.0 || !(f->constant.real() > 0.0))
        throw ParseError("div floor must be a positive real constant", line, col);
      return fold_binary(ExprKind::Div, std::move(a), std::move(b),
                         f->constant.real(), cur_);
    }
    if (name == "blaschke") {
      cur_.expect('(', "after blaschke");
      ExprPtr a = parse_expr();
      if (!is_constant(a) || a->constant.imag() != 0.0 || a->constant.real() < 0.0)
        throw ParseError("blaschke: a must be a real constant >= 0", line, col);
      std::vector<Complex> zeros;
      while (cur_.consume(',')) {
        ExprPtr z = parse_expr();
        if (!is_constant(z))
          throw ParseError("blaschke: zeros must be constants", line, col);
        if (!(z->constant.imag() > 0.0))
          throw ParseError("blaschke: zeros must satisfy Im z > 0", line, col);
        zeros.push_back(z->constant);
      }
      cur_.expect(';', "before the blaschke argument");
      ExprPtr arg = parse_expr();
      cur_.expect(')', "to close blaschke");
      return make_blaschke(a->constant.real(), std::move(zeros), std::move(arg));
    }
    throw ParseError("unknown atom '" + name + "'", line, col);
  }
};

// Validation pass: walk the tree and check declared floors by sampling.
// Grid values near a local minimum are refined by bisection, so zeros of
// smooth denominators between grid nodes (1/x, 1/sin x) are caught even
// though the check remains a sampled certificate.
void validate_floors(const Expr& e, const std::vector<double>& xs) {
  if (e.lhs) validate_floors(*e.lhs, xs);
  if (e.rhs) validate_floors(*e.rhs, xs);
  auto check = [&](const Expr& sub, double floor, Complex offset, const char* what) {
    auto mod = [&](double x) { return std::abs(eval(sub, Complex(x, 0.0)) + offset); };
    std::vector<double> v(xs.size());
    for (size_t j = 0; j < xs.size(); ++j) v[j] = mod(xs[j]);
    auto fail = [&](double x) {
      throw ValidationError(std::string(what) + " floor " + std::to_string(floor) +
                                " violated (sampled)",
                            x);
    };
    for (size_t j = 0; j < xs.size(); ++j) {
      if (v[j] < floor) fail(xs[j]);
      if (j == 0 || j + 1 >= xs.size()) continue;
      if (v[j] > v[j - 1] || v[j] > v[j + 1]) continue;
      // refine around the local minimum
      double a = xs[j - 1], b = xs[j + 1];
      double fa = v[j - 1], fb = v[j + 1];
      double m = xs[j], fm = v[j];
      for (int it = 0; it < 40 && b - a > 1e-14 * (1.0 + std::abs(m)); ++it) {
        const double l = 0.5 * (a + m), r = 0.5 * (m + b);
        const double fl = mod(l), fr = mod(r);
        if (fl < fm && fl <= fr) {
          b = m; fb = fm; m = l; fm = fl;
        } else if (fr < fm) {
          a = m; fa = fm; m = r; fm = fr;
        } else {
          a = l; fa = fl; b = r; fb = fr;
        }
        if (fm < floor) fail(m);
      }
    }
  };
  switch (e.kind) {
    case ExprKind::Div:
      check(*e.rhs, e.div_floor, Complex(0.0, 0.0), "denominator");
      break;
    case ExprKind::Log1p:
      check(*e.lhs, kDefaultDenominatorFloor, Complex(1.0, 0.0), "log1p");
      break;
    case ExprKind::Phi:
      check(*e.lhs, kDefaultDenominatorFloor, Complex(0.0, 1.0), "phi denominator");
      break;
    default:
      break;
  }
}

void validate_entry(const Expr& e, const std::vector<double>& xs) {
  validate_floors(e, xs);
  for (double x : xs) {
    const Complex v = eval(e, Complex(x, 0.0));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ValidationError("entry does not evaluate to a finite value", x);
  }
}

}  // namespace

ExprPtr parse_expression(const std::string& text) {
  Parser p(text);
  ExprPtr e = p.parse_expr();
  p.expect_end();
  return e;
}

SymbolSpec parse_symbol(const std::string& text) {
  Parser p(text);
  std::vector<ExprPtr> entries;
  int size = 1;
  if (p.at_matrix()) {
    auto rows = p.parse_matrix();
    size = static_cast<int>(rows.size());
    for (const auto& row : rows)
      if (static_cast<int>(row.size()) != size)
        throw ParseError("matrix must be square with rows of equal length", 1, 1);
    for (auto& row : rows)
      for (auto& e : row) entries.push_back(std::move(e));
  } else {
    entries.push_back(p.parse_expr());
  }
  p.expect_end();

  static const SampleGrid validation_grid = SampleGrid::tangent(10001);
  for (const auto& e : entries) validate_entry(*e, validation_grid.nodes);

  return make_symbol(size, std::move(entries));
}

}  // namespace meanwind::symbolkit
