#pragma once

// Brute-force concrete interpreter used as a test oracle. It shares no code
// with the analyses: values are int64 wrapped to the configured width.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "domcheck/cfa.hpp"

namespace domcheck {

enum class OracleVerdict { Safe, Unsafe, Inconclusive };

const char* to_string(OracleVerdict v);

struct OracleOptions {
  /// Values tried at every nondet site: nondet calls, uninitialized locals,
  /// and divisions by zero.
  std::vector<std::int64_t> nondet_values = {-2, -1, 0, 1, 2, 3, 4, 5, 6};
  std::size_t step_limit = 4000;      // per execution path
  std::size_t work_limit = 5'000'000; // total edges over all paths
  unsigned width = 32;
};

struct OracleResult {
  OracleVerdict verdict = OracleVerdict::Safe;
  std::size_t paths = 0;
  std::vector<int> error_trace;  // edge indices of the first failing run
};

OracleResult oracle_interpret(const Cfa& cfa, const OracleOptions& opt = {});

/// Undefined marker in reachable valuations.
constexpr std::int64_t kUndefined = INT64_MIN;

/// Every (location, valuation) pair reachable under the options, found by
/// graph search with a visited set. Intended for small loop-bounded programs.
std::map<LocId, std::set<std::vector<std::int64_t>>> oracle_reachable(const Cfa& cfa,
                                                                      const OracleOptions& opt = {});

/// Breadth-first search over concrete states with a visited set, so loops
/// over finitely many valuations terminate. Inconclusive once more than
/// `work_limit` states are stored.
OracleVerdict oracle_search(const Cfa& cfa, const OracleOptions& opt = {});

/// Concrete successors of one edge; empty when an assume fails.
std::vector<std::vector<std::int64_t>> oracle_step(const CfaEdge& edge,
                                                   const std::vector<std::int64_t>& valuation,
                                                   const OracleOptions& opt);

/// Wraps to a signed value of `width` bits.
std::int64_t wrap_to_width(std::int64_t x, unsigned width);

}  // namespace domcheck
