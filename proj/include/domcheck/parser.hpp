#pragma once

#include "domcheck/ast.hpp"

#include <string_view>

namespace domcheck {

/// Parses MiniC source. Throws FrontendError (Syntax or UnsupportedConstruct)
/// carrying the 1-based line and column of the offending token.
Program parse(std::string_view source);

}  // namespace domcheck
