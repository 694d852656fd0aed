#pragma once

#include <string_view>

#include "rdtm/expr.hpp"

namespace rdtm {

/// Parses the expression grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' integer)?
///   primary := number | 'x' | 't' | 'pi' | ('sin'|'cos'|'exp') '(' expr ')' | '(' expr ')'
///
/// Exponents must be non-negative integer literals. Divisors must be nonzero
/// constants, or x-free expressions of t (for exact solutions like x/(1+t)). Constant subexpressions are folded; a constant times
/// an expression becomes a Scale node. Throws ParseError.
Expr parse_expr(std::string_view text);

}  // namespace rdtm
