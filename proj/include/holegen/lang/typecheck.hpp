#pragma once

#include <vector>

#include "holegen/lang/ast.hpp"

namespace holegen::lang {

/// Resolves names, assigns slots, annotates every expression with its static
/// type and every hole with its site. Throws TypeError.
void typecheck(Program& p);

/// Types a standalone expression against `scope` (locals bound to slots in
/// order) and the program's globals and functions.
Type resolveType(Expr& e, const Program& p, const std::vector<ScopeVar>& scope);

}  // namespace holegen::lang
