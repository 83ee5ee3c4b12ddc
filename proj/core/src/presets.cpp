#include "meanwind/presets.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "meanwind/parser.hpp"

namespace meanwind::symbolkit {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s = buf;
  if (v < 0.0) return "(" + s + ")";
  return s;
}

std::string phi_power(int m) {
  if (m == 0) return "1";
  if (m == 1) return "phi(x)";
  if (m > 1) return "phi(x)^" + std::to_string(m);
  if (m == -1) return "1/phi(x)";
  return "1/phi(x)^" + std::to_string(-m);
}

SymbolSpec tagged(SymbolSpec sym, SymbolClass tag) {
  sym.tag = tag;
  return sym;
}

}  // namespace

SymbolSpec make_identity(int r) {
  if (r < 1 || r > 8) throw std::invalid_argument("identity: r must be in [1, 8]");
  if (r == 1) return parse_symbol("1");
  std::string text = "[";
  for (int i = 0; i < r; ++i) {
    text += i == 0 ? "[" : ",[";
    for (int j = 0; j < r; ++j) {
      if (j > 0) text += ',';
      text += i == j ? "1" : "0";
    }
    text += ']';
  }
  text += ']';
  return parse_symbol(text);
}

SymbolSpec make_whirl(double k, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("whirl: alpha must be > 0");
  return tagged(parse_symbol("exp(i*" + num(k) + "*sign(x)*abs(x)^" + num(alpha) + ")"),
                SymbolClass::Whirl);
}

SymbolSpec make_rational(int m) {
  return tagged(parse_symbol(phi_power(m)), SymbolClass::Rational);
}

SymbolSpec make_rational_smooth(int m) {
  return tagged(parse_symbol(phi_power(m) + "*(x+2*i)/(x+i)"), SymbolClass::Rational);
}

SymbolSpec make_jump(double delta) {
  const double c = delta / (2.0 * std::numbers::pi);
  return parse_symbol("exp(-" + num(c) + "*(log1p(x-1+i)-log1p(x-1-i)))");
}

SymbolSpec make_sap(double kappa_minus, double kappa_plus) {
  const std::string s = "(1+x/(1+x*x)^0.5)/2";
  const std::string sqrt2 = num(std::numbers::sqrt2);
  std::string text = "exp(i*(" + s + "*(" + num(kappa_plus) + "*x+sin(x))+(1-" + s +
                     ")*(" + num(kappa_minus) + "*x+cos(" + sqrt2 + "*x))))";
  return tagged(parse_symbol(text), SymbolClass::Sap);
}

SymbolSpec make_ap(double kappa) {
  return tagged(parse_symbol("exp(i*(" + num(kappa) + "*x+sin(x)))"),
                SymbolClass::AlmostPeriodic);
}

SymbolSpec make_diag2(int m1, int m2) {
  return tagged(parse_symbol("[[" + phi_power(m1) + ",0],[0," + phi_power(m2) + "]]"),
                SymbolClass::Rational);
}

SymbolSpec make_conj_blaschke(double a) {
  if (!(a >= 0.0 && a < 1.0))
    throw std::invalid_argument("conj_blaschke: a must be in [0, 1)");
  return parse_symbol("(1+" + num(a) + "*phi(x))/(phi(x)+" + num(a) + ")");
}

namespace {

struct PresetArgs {
  std::vector<double> positional;
  std::map<std::string, double> named;

  double get(const std::string& key, size_t index, double fallback,
             bool required = false) const {
    if (auto it = named.find(key); it != named.end()) return it->second;
    if (index < positional.size()) return positional[index];
    if (required) throw std::invalid_argument("preset: missing argument '" + key + "'");
    return fallback;
  }
};

PresetArgs parse_args(const std::string& s, size_t& pos) {
  PresetArgs args;
  auto skip_ws = [&] { while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos; };
  skip_ws();
  if (pos >= s.size() || s[pos] != '(') return args;
  ++pos;
  for (;;) {
    skip_ws();
    if (pos < s.size() && s[pos] == ')') { ++pos; break; }
    std::string key;
    size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    skip_ws();
    if (pos < s.size() && s[pos] == '=') {
      key = s.substr(start, pos - start);
      // trim
      while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
      ++pos;
      skip_ws();
      start = pos;
    } else {
      pos = start;  // positional; re-read as number
    }
    size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(s.substr(pos), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("preset: malformed numeric argument in '" + s + "'");
    }
    pos += used;
    if (key.empty())
      args.positional.push_back(value);
    else
      args.named[key] = value;
    skip_ws();
    if (pos < s.size() && s[pos] == ',') { ++pos; continue; }
    if (pos < s.size() && s[pos] == ')') { ++pos; break; }
    throw std::invalid_argument("preset: expected ',' or ')' in '" + s + "'");
  }
  return args;
}

int as_int(double v, const char* what) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-12)
    throw std::invalid_argument(std::string("preset: ") + what + " must be an integer");
  return static_cast<int>(r);
}

}  // namespace

SymbolSpec make_preset(const std::string& spec) {
  std::string s = spec;
  if (s.rfind("preset:", 0) == 0) s = s.substr(7);
  size_t pos = 0;
  while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
    ++pos;
  const std::string name = s.substr(0, pos);
  PresetArgs args = parse_args(s, pos);
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size())
    throw std::invalid_argument("preset: trailing input in '" + spec + "'");

  if (name == "identity") return make_identity(as_int(args.get("r", 0, 1.0), "r"));
  if (name == "whirl")
    return make_whirl(args.get("k", 0, 0.0, true), args.get("alpha", 1, 0.0, true));
  if (name == "rational") return make_rational(as_int(args.get("m", 0, 0.0, true), "m"));
  if (name == "rational_smooth")
    return make_rational_smooth(as_int(args.get("m", 0, 0.0, true), "m"));
  if (name == "jump") return make_jump(args.get("delta", 0, 0.0, true));
  if (name == "sap") return make_sap(args.get("km", 0, 0.0, true), args.get("kp", 1, 0.0, true));
  if (name == "ap") return make_ap(args.get("kappa", 0, 0.0, true));
  if (name == "diag2")
    return make_diag2(as_int(args.get("m1", 0, 0.0, true), "m1"),
                      as_int(args.get("m2", 1, 0.0, true), "m2"));
  if (name == "conj_blaschke") return make_conj_blaschke(args.get("a", 0, 0.0, true));
  if (name == "phase_parabola") return make_whirl(args.get("k", 0, 1.0), 2.0);
  if (name == "phase_sin") return parse_symbol("exp(i*sin(x))");
  if (name == "phase_linear")
    return tagged(parse_symbol("exp(i*" + num(args.get("kappa", 0, 1.0, true)) + "*x)"),
                  SymbolClass::AlmostPeriodic);
  throw std::invalid_argument("unknown preset '" + name + "'");
}

SymbolSpec resolve_symbol(const std::string& source) {
  if (source.rfind("preset:", 0) == 0) return make_preset(source);
  return parse_symbol(source);
}

}  // namespace meanwind::symbolkit
