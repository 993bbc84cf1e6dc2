#pragma once

#include <string_view>

#include "holegen/lang/ast.hpp"

namespace holegen::lang {

/// Parses and type checks a MiniJ unit (`.mj`, or `.mjt` with hole markers).
/// Throws ParseError or TypeError.
Program parse(std::string_view text);

/// Parses without type checking.
Program parseSyntax(std::string_view text);

/// Parses a single expression (no resolution).
ExprPtr parseExpression(std::string_view text);

}  // namespace holegen::lang
