#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "domcheck/bdd_domain.hpp"
#include "domcheck/explicit_domain.hpp"

namespace domcheck {

enum class Config { ExplicitInt, BddBool, BddIntEq, BddIntEqAdd, BddInt };

const char* to_string(Config c);  // explicit-int, bdd-bool, ...
std::optional<Config> parse_config(const std::string& s);
std::vector<Config> all_configs();

/// Largest domain type sent to the BDD, if any.
std::optional<DomainType> bdd_threshold(Config c);

struct DomainAssignment {
  Config config = Config::ExplicitInt;
  Precision explicit_vars;  // by VarId
  Precision bdd_vars;
};

DomainAssignment build_assignment(const DomainTyping& typing, Config config);

struct CompositeState {
  LocId loc = 0;
  ExplicitState expl;
  NodeRef bdd = kTrue;
};

/// Cartesian product of the explicit and BDD domains. Each variable belongs
/// to exactly one component.
class CompositeDomain {
 public:
  CompositeDomain(const Cfa& cfa, const DomainTyping& typing, DomainAssignment assignment,
                  NodeStore& store, BddOptions bdd_options = {});

  CompositeState initial() const;
  /// nullopt when the successor is infeasible.
  std::optional<CompositeState> transfer(const CompositeState& s, const CfaEdge& edge);
  /// Joined state when the explicit parts agree, nullopt to keep both.
  std::optional<CompositeState> merge(const CompositeState& s1, const CompositeState& s2);
  /// s is covered by r: same location, r's explicit part is weaker and
  /// s's BDD part entails r's.
  bool covered(const CompositeState& s, const CompositeState& r);

  const DomainAssignment& assignment() const { return assignment_; }
  BddDomain& bdd() { return bdd_; }
  const Cfa& cfa() const { return cfa_; }

 private:
  ForeignLookup lookup(const ExplicitState& e) const;
  bool mentions_bdd(const Expr& e) const;

  const Cfa& cfa_;
  DomainAssignment assignment_;
  BddDomain bdd_;
};

enum class WaitlistOrder { Dfs, Bfs };

struct Limits {
  double cpu_seconds = 900.0;
  std::size_t max_states = 1'000'000;
  std::size_t max_nodes = 50'000'000;
};

struct EngineOptions {
  Config config = Config::ExplicitInt;
  WaitlistOrder waitlist = WaitlistOrder::Dfs;
  Limits limits;
  unsigned bv_width = 32;
  std::vector<VarId> bdd_order;    // empty = declaration order
  bool confirm = true;             // replay FALSE traces concretely
  std::size_t confirm_budget = 100'000;
};

enum class Outcome { True, False, Unknown };

const char* to_string(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  bool confirmed = false;
  std::string limit_hit;    // cpu, states, nodes, or empty
  std::string diagnostic;
  double cpu_seconds = 0;
  std::size_t reached_states = 0;
  std::size_t waitlist_peak = 0;
  std::size_t bdd_peak_nodes = 0;
  std::size_t bdd_bits = 0;
  std::vector<int> trace;   // CFA edge indices from the entry to an error location
};

/// Reachability analysis over one CFA. Owns its node store; not thread-safe,
/// but independent engines may run on different threads.
class Engine {
 public:
  struct Reached {
    CompositeState state;
    std::int32_t parent = -1;  // index into reached()
    std::int32_t edge = -1;    // CFA edge from the parent
  };

  Engine(const Cfa& cfa, const DomainTyping& typing, EngineOptions options);
  ~Engine();

  Verdict run();

  const std::vector<Reached>& reached() const { return reached_; }
  CompositeDomain& domain() { return *domain_; }
  NodeStore& store() { return store_; }

 private:
  struct Edge {
    std::int32_t edge;
    std::int32_t target;
  };

  std::vector<int> parent_trace(std::int32_t state) const;
  std::optional<std::vector<int>> confirm(std::int32_t error_state) const;

  const Cfa& cfa_;
  EngineOptions options_;
  NodeStore store_;
  std::unique_ptr<CompositeDomain> domain_;
  std::vector<Reached> reached_;
  std::vector<std::vector<Edge>> successors_;  // abstract reachability graph
};

/// Convenience wrapper: infer types and run one configuration.
Verdict verify(const Cfa& cfa, const EngineOptions& options);

/// Thread CPU time in seconds.
double thread_cpu_seconds();

}  // namespace domcheck
