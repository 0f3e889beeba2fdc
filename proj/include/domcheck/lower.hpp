#pragma once

#include "domcheck/ast.hpp"
#include "domcheck/cfa.hpp"

#include <string_view>

namespace domcheck {

/// Flattens `main` into a single CFA, inlining every call. Callee locals are
/// renamed `name@callee#k` with a per-call-site counter; shadowing
/// redeclarations in one function get a `.n` suffix. Unreachable locations are
/// pruned and the survivors numbered in depth-first order from the entry.
///
/// Uninitialized globals start at 0; uninitialized locals hold an arbitrary
/// value.
///
/// Throws FrontendError (Recursion, UndefinedFunction, UndeclaredVariable,
/// Syntax for misplaced break/continue/labels).
Cfa lower(const Program& program);

/// parse + lower.
Cfa build_cfa(std::string_view source);

}  // namespace domcheck
