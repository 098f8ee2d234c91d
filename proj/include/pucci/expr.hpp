#pragma once

#include <functional>
#include <string>

#include "pucci/pucci_core.hpp"

namespace pucci {

/// Compiled scalar expression over the space-time variables.
/// Grammar (EBNF):
///   expr    = term { ("+" | "-") term } ;
///   term    = power { ("*" | "/") power } ;
///   power   = unary [ "^" power ] ;                (right associative)
///   unary   = "-" unary | primary ;
///   primary = number | variable | constant
///           | function "(" expr { "," expr } ")"
///           | "(" expr ")" ;
///   variable = "x" | "y" | "t" ;
///   constant = "pi" | "e" ;
///   function = "sin" | "cos" | "exp" | "log" | "sqrt" | "abs"
///            | "min" | "max" | "pow" ;
/// Parse errors throw ConfigError with the offending position.
using ExprFn = std::function<double(double x, double y, double t)>;

ExprFn parse_expression(const std::string& text);

/// Wraps a parsed expression as a sampling field; the label is the source text.
ScalarField make_expr_field(const std::string& text);

}  // namespace pucci
