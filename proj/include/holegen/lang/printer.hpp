#pragma once

#include <string>

#include "holegen/lang/ast.hpp"

namespace holegen::lang {

/// Canonical source text; parse(print(p)) is structurally equal to p.
std::string print(const Program& p);

std::string printExpr(const Expr& e);
std::string printStmt(const Stmt& s, int indent = 0);

/// Descriptor body without the `?H<k>` prefix: `{kind=...; ...; src=...}`.
std::string printHoleSpec(const HoleSpec& h);

std::string printLiteral(const Value& v);

}  // namespace holegen::lang
