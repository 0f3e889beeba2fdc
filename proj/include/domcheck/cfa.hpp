#pragma once

#include "domcheck/ast.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace domcheck {

using LocId = std::int32_t;

struct CfaEdge {
  enum class Kind : std::uint8_t { Decl, Assign, Assume, Skip };

  LocId source = 0;
  LocId target = 0;
  Kind kind = Kind::Skip;
  VarId var = kNoVar;     // Decl/Assign target
  ExprPtr expr;           // Decl init (may be null), Assign rhs, Assume condition
  bool polarity = true;   // Assume
  int line = 0;
};

std::string to_string(const CfaEdge& edge, const std::vector<std::string>& names);

struct VarInfo {
  std::string name;   // unique after mangling
  int decl_line = 0;
  bool global = false;
};

/// Control-flow automaton of the whole program, with every call inlined
/// into `main`. Location ids are dense, 0 is the entry.
struct Cfa {
  std::int32_t num_locations = 0;
  std::vector<CfaEdge> edges;
  LocId entry = 0;
  std::vector<bool> is_error;                 // indexed by location
  std::vector<VarInfo> variables;             // indexed by VarId, declaration order
  std::vector<std::vector<std::int32_t>> out; // edge indices per location

  std::vector<LocId> error_locations() const;
  std::vector<std::string> variable_names() const;
  VarId find_variable(const std::string& name) const;
  std::size_t num_vars() const { return variables.size(); }
};

}  // namespace domcheck
