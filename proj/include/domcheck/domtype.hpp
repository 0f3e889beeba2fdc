#pragma once

#include "domcheck/cfa.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace domcheck {

/// Usage-derived refinement of `int`, ordered by inclusion:
/// Bool < IntEq < IntEqAdd < Int.
enum class DomainType : std::uint8_t { Bool = 0, IntEq = 1, IntEqAdd = 2, Int = 3 };

const char* to_string(DomainType t);
std::optional<DomainType> parse_domain_type(const std::string& s);

inline DomainType join(DomainType a, DomainType b) { return a < b ? b : a; }

/// What one CFA edge demands of the variables it mentions.
struct EdgeConstraints {
  std::vector<std::pair<VarId, DomainType>> minimum;
  std::vector<std::pair<VarId, VarId>> partners;     // equality / copy links
  std::vector<std::pair<VarId, std::int32_t>> constants;
};

EdgeConstraints expression_constraints(const CfaEdge& edge);

struct DomainTyping {
  std::vector<DomainType> type_of;                  // indexed by VarId
  std::vector<std::vector<std::int32_t>> value_set; // sorted; non-empty iff IntEq
  std::vector<int> witness_line;                    // line of the edge forcing the type, 0 if none
  std::vector<std::int32_t> partition;              // equality class representative

  std::size_t size() const { return type_of.size(); }
};

/// Least typing satisfying every edge's constraints. Partners are unified, so
/// linked variables end up with one type and, for IntEq, one shared value set.
DomainTyping infer(const Cfa& cfa);

/// Counts per exclusive class: Bool, IntEq\Bool, IntEqAdd\IntEq, Int\IntEqAdd.
std::array<std::size_t, 4> histogram(const DomainTyping& typing);

}  // namespace domcheck
