// Named symbol presets, addressable from the CLI as e.g.
//   preset:whirl(k=2,alpha=0.5)
//
// Available presets:
//   identity(r=1)           r x r identity
//   whirl(k,alpha)          exp(i k sign(x) |x|^alpha)
//   rational(m)             phi(x)^m, winding m
//   rational_smooth(m)      phi(x)^m (x+2i)/(x+i), winding m, non-unimodular
//   jump(delta)             unimodular limit symbol with arg jump delta
//   sap(km,kp)              blended semi-almost-periodic, mean motions km/kp
//   ap(kappa)               exp(i (kappa x + sin x))
//   diag2(m1,m2)            diag(phi^m1, phi^m2), det winding m1+m2
//   conj_blaschke(a)        (1 + a phi(x)) / (phi(x) + a), 0 <= a < 1
//   phase_parabola(k)       exp(i k sign(x) x^2) alias of whirl(k,2)
//   phase_sin               exp(i sin x)
//   phase_linear(kappa)     exp(i kappa x)

#pragma once

#include <string>

#include "meanwind/symbol.hpp"

namespace meanwind::symbolkit {

SymbolSpec make_identity(int r = 1);
SymbolSpec make_whirl(double k, double alpha);
SymbolSpec make_rational(int m);
SymbolSpec make_rational_smooth(int m);
SymbolSpec make_jump(double delta);
SymbolSpec make_sap(double kappa_minus, double kappa_plus);
SymbolSpec make_ap(double kappa);
SymbolSpec make_diag2(int m1, int m2);
SymbolSpec make_conj_blaschke(double a);

// Parses "name(arg,...)" or "name(key=value,...)"; the optional "preset:"
// prefix is accepted and stripped.
SymbolSpec make_preset(const std::string& spec);

// Resolves either "preset:..." / a known preset name, or DSL source text.
SymbolSpec resolve_symbol(const std::string& source);

}  // namespace meanwind::symbolkit
