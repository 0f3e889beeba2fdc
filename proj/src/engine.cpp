#include "domcheck/engine.hpp"

#include <algorithm>
#include <ctime>
#include <deque>
#include <set>
#include <tuple>
#include <unordered_map>

#include "domcheck/oracle.hpp"

namespace domcheck {

namespace {

struct LimitHit {
  std::string which;
};

// Trie over the sorted binding lists of the reached explicit parts, one root
// per location. A stored r can cover s only if r's bindings are a
// subsequence of s's, so lookups follow only edges that s contains.
class CoverIndex {
 public:
  explicit CoverIndex(std::int32_t locations) : nodes_(static_cast<std::size_t>(locations)) {}

  void insert(LocId loc, const ExplicitState& e, std::int32_t idx) {
    std::int32_t n = loc;
    for (auto [v, c] : e.bindings()) {
      std::int32_t next = -1;
      for (const Child& k : nodes_[n].kids)
        if (k.var == v && k.value == c) next = k.node;
      if (next < 0) {
        next = static_cast<std::int32_t>(nodes_.size());
        nodes_[n].kids.push_back({v, c, next});
        nodes_.emplace_back();
      }
      n = next;
    }
    nodes_[n].states.push_back(idx);
  }

  /// First stored state at `loc` whose bindings are a subset of e's and
  /// that satisfies `accept`, or -1.
  template <typename F>
  std::int32_t find(LocId loc, const ExplicitState& e, F&& accept) const {
    return search(loc, e.bindings(), 0, accept);
  }

 private:
  struct Child {
    VarId var;
    std::int32_t value;
    std::int32_t node;
  };
  struct Node {
    std::vector<Child> kids;
    std::vector<std::int32_t> states;
  };

  template <typename F>
  std::int32_t search(std::int32_t n, const std::vector<std::pair<VarId, std::int32_t>>& b, std::size_t pos,
                      F& accept) const {
    for (std::int32_t idx : nodes_[n].states)
      if (accept(idx)) return idx;
    for (const Child& k : nodes_[n].kids) {
      auto it = std::lower_bound(b.begin() + static_cast<std::ptrdiff_t>(pos), b.end(),
                                 std::pair<VarId, std::int32_t>{k.var, k.value});
      if (it == b.end() || it->first != k.var || it->second != k.value) continue;
      std::int32_t r = search(k.node, b, static_cast<std::size_t>(it - b.begin()) + 1, accept);
      if (r >= 0) return r;
    }
    return -1;
  }

  std::vector<Node> nodes_;
};

// Position of each location in a reverse postorder of the CFA from the entry.
std::vector<std::int32_t> reverse_postorder(const Cfa& cfa) {
  const auto n = static_cast<std::size_t>(cfa.num_locations);
  std::vector<std::int32_t> rank(n, static_cast<std::int32_t>(n));
  std::vector<bool> seen(n, false);
  std::vector<LocId> post;
  std::vector<std::pair<LocId, std::size_t>> stack{{cfa.entry, 0}};
  seen[cfa.entry] = true;
  while (!stack.empty()) {
    auto& [loc, next] = stack.back();
    if (next < cfa.out[loc].size()) {
      LocId t = cfa.edges[cfa.out[loc][next++]].target;
      if (!seen[t]) {
        seen[t] = true;
        stack.emplace_back(t, 0);
      }
      continue;
    }
    post.push_back(loc);
    stack.pop_back();
  }
  for (std::size_t i = 0; i < post.size(); ++i)
    rank[post[post.size() - 1 - i]] = static_cast<std::int32_t>(i);
  return rank;
}

// Bfs is plain FIFO. Dfs takes the state whose location comes first in
// reverse postorder, newest first among equals, so a join point waits for
// all of its pending predecessors before its BDD part is propagated.
class Waitlist {
 public:
  Waitlist(WaitlistOrder order, std::vector<std::int32_t> rank) : order_(order), rank_(std::move(rank)) {}

  void push(std::int32_t idx, LocId loc) {
    if (order_ == WaitlistOrder::Bfs) fifo_.push_back(idx);
    else sorted_.emplace(rank_[loc], -(seq_++), idx);
  }

  std::int32_t pop() {
    if (order_ == WaitlistOrder::Bfs) {
      std::int32_t idx = fifo_.front();
      fifo_.pop_front();
      return idx;
    }
    auto it = sorted_.begin();
    std::int32_t idx = std::get<2>(*it);
    sorted_.erase(it);
    return idx;
  }

  bool empty() const { return fifo_.empty() && sorted_.empty(); }
  std::size_t size() const { return fifo_.size() + sorted_.size(); }

 private:
  WaitlistOrder order_;
  std::vector<std::int32_t> rank_;
  std::deque<std::int32_t> fifo_;
  std::set<std::tuple<std::int32_t, std::int64_t, std::int32_t>> sorted_;
  std::int64_t seq_ = 0;
};

void split_conjuncts(const ExprPtr& e, bool pol, std::vector<ExprPtr>& out) {
  if (e->kind == Expr::Kind::Binary &&
      ((pol && e->bop == BinOp::LogAnd) || (!pol && e->bop == BinOp::LogOr))) {
    split_conjuncts(e->lhs, pol, out);
    split_conjuncts(e->rhs, pol, out);
    return;
  }
  out.push_back(e);
}

void collect_constants(const Expr& e, std::set<std::int64_t>& out) {
  if (e.kind == Expr::Kind::Const) out.insert(e.value);
  if (e.lhs) collect_constants(*e.lhs, out);
  if (e.rhs) collect_constants(*e.rhs, out);
}

}  // namespace

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

const char* to_string(Config c) {
  switch (c) {
    case Config::ExplicitInt: return "explicit-int";
    case Config::BddBool: return "bdd-bool";
    case Config::BddIntEq: return "bdd-inteq";
    case Config::BddIntEqAdd: return "bdd-inteqadd";
    case Config::BddInt: return "bdd-int";
  }
  return "?";
}

std::optional<Config> parse_config(const std::string& s) {
  for (Config c : all_configs())
    if (s == to_string(c)) return c;
  return std::nullopt;
}

std::vector<Config> all_configs() {
  return {Config::ExplicitInt, Config::BddBool, Config::BddIntEq, Config::BddIntEqAdd, Config::BddInt};
}

std::optional<DomainType> bdd_threshold(Config c) {
  switch (c) {
    case Config::ExplicitInt: return std::nullopt;
    case Config::BddBool: return DomainType::Bool;
    case Config::BddIntEq: return DomainType::IntEq;
    case Config::BddIntEqAdd: return DomainType::IntEqAdd;
    case Config::BddInt: return DomainType::Int;
  }
  return std::nullopt;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::True: return "TRUE";
    case Outcome::False: return "FALSE";
    case Outcome::Unknown: return "UNKNOWN";
  }
  return "?";
}

DomainAssignment build_assignment(const DomainTyping& typing, Config config) {
  DomainAssignment a;
  a.config = config;
  a.explicit_vars.assign(typing.size(), false);
  a.bdd_vars.assign(typing.size(), false);
  auto t = bdd_threshold(config);
  for (std::size_t v = 0; v < typing.size(); ++v) {
    if (t && typing.type_of[v] <= *t) a.bdd_vars[v] = true;
    else a.explicit_vars[v] = true;
  }
  return a;
}

// ---------------------------------------------------------------------------

CompositeDomain::CompositeDomain(const Cfa& cfa, const DomainTyping& typing,
                                 DomainAssignment assignment, NodeStore& store,
                                 BddOptions bdd_options)
    : cfa_(cfa),
      assignment_(std::move(assignment)),
      bdd_(store, cfa, typing, assignment_.bdd_vars, std::move(bdd_options)) {}

CompositeState CompositeDomain::initial() const {
  CompositeState s;
  s.loc = cfa_.entry;
  s.bdd = bdd_.initial();
  return s;
}

ForeignLookup CompositeDomain::lookup(const ExplicitState& e) const {
  return [&e](VarId v) { return e.get(v); };
}

bool CompositeDomain::mentions_bdd(const Expr& e) const {
  std::vector<VarId> vars;
  collect_vars(e, vars);
  for (VarId v : vars)
    if (assignment_.bdd_vars[v]) return true;
  return false;
}

std::optional<CompositeState> CompositeDomain::transfer(const CompositeState& s, const CfaEdge& edge) {
  CompositeState out = s;
  out.loc = edge.target;
  switch (edge.kind) {
    case CfaEdge::Kind::Skip: return out;
    case CfaEdge::Kind::Decl:
    case CfaEdge::Kind::Assign:
      if (assignment_.bdd_vars[edge.var]) {
        out.bdd = bdd_.assign(s.bdd, edge.var, edge.expr.get(), lookup(s.expl));
        if (out.bdd == kFalse) return std::nullopt;
      } else {
        out.expl = assign(s.expl, edge.var, edge.expr.get(), assignment_.explicit_vars);
      }
      return out;
    case CfaEdge::Kind::Assume: {
      std::vector<ExprPtr> parts;
      split_conjuncts(edge.expr, edge.polarity, parts);
      for (const ExprPtr& c : parts) {
        out.expl = assume(out.expl, *c, edge.polarity, assignment_.explicit_vars);
        if (out.expl.is_bottom()) return std::nullopt;
        if (mentions_bdd(*c)) {
          out.bdd = bdd_.assume(out.bdd, *c, edge.polarity, lookup(out.expl));
          if (out.bdd == kFalse) return std::nullopt;
        }
      }
      return out;
    }
  }
  return out;
}

std::optional<CompositeState> CompositeDomain::merge(const CompositeState& s1, const CompositeState& s2) {
  if (s1.loc != s2.loc || !(s1.expl == s2.expl)) return std::nullopt;
  CompositeState m = s1;
  m.bdd = bdd_.join(s1.bdd, s2.bdd);
  return m;
}

bool CompositeDomain::covered(const CompositeState& s, const CompositeState& r) {
  return s.loc == r.loc && subsumes(s.expl, r.expl) && bdd_.entails(s.bdd, r.bdd);
}

// ---------------------------------------------------------------------------

Engine::Engine(const Cfa& cfa, const DomainTyping& typing, EngineOptions options)
    : cfa_(cfa), options_(std::move(options)), store_(0, options_.limits.max_nodes) {
  BddOptions bo;
  bo.width = options_.bv_width;
  bo.order = options_.bdd_order;
  domain_ = std::make_unique<CompositeDomain>(cfa, typing, build_assignment(typing, options_.config),
                                              store_, bo);
}

Engine::~Engine() = default;

std::vector<int> Engine::parent_trace(std::int32_t state) const {
  std::vector<int> edges;
  for (std::int32_t i = state; reached_[i].parent >= 0; i = reached_[i].parent) edges.push_back(reached_[i].edge);
  return {edges.rbegin(), edges.rend()};
}

std::optional<std::vector<int>> Engine::confirm(std::int32_t error_state) const {
  OracleOptions opt;
  std::set<std::int64_t> consts;
  for (const auto& e : cfa_.edges)
    if (e.expr) collect_constants(*e.expr, consts);
  std::set<std::int64_t> candidates;
  for (std::int64_t c = -2; c <= 6; ++c) candidates.insert(c);
  for (auto c : consts)
    for (std::int64_t d = -1; d <= 1; ++d) candidates.insert(wrap_to_width(c + d, 32));
  opt.nondet_values.assign(candidates.begin(), candidates.end());

  // search the abstract reachability graph with concrete valuations
  struct Item {
    std::int32_t state;
    std::vector<std::int64_t> val;
    std::int32_t tree;  // index into `tree`
  };
  std::vector<std::pair<std::int32_t, int>> tree;  // (parent item, edge)
  std::vector<Item> stack;
  std::set<std::pair<std::int32_t, std::vector<std::int64_t>>> visited;
  stack.push_back({0, std::vector<std::int64_t>(cfa_.num_vars(), kUndefined), -1});
  std::size_t work = 0;
  while (!stack.empty() && work < options_.confirm_budget) {
    Item it = std::move(stack.back());
    stack.pop_back();
    if (it.state == error_state || cfa_.is_error[reached_[it.state].state.loc]) {
      std::vector<int> edges;
      for (std::int32_t t = it.tree; t >= 0; t = tree[t].first) edges.push_back(tree[t].second);
      return std::vector<int>(edges.rbegin(), edges.rend());
    }
    if (!visited.emplace(it.state, it.val).second) continue;
    if (static_cast<std::size_t>(it.state) >= successors_.size()) continue;
    for (const Edge& e : successors_[it.state]) {
      ++work;
      for (auto& next : oracle_step(cfa_.edges[e.edge], it.val, opt)) {
        tree.emplace_back(it.tree, e.edge);
        stack.push_back({e.target, std::move(next), static_cast<std::int32_t>(tree.size() - 1)});
      }
    }
  }
  return std::nullopt;
}

Verdict Engine::run() {
  Verdict verdict;
  const double start = thread_cpu_seconds();
  const double budget = options_.limits.cpu_seconds;
  store_.set_check_hook([&] {
    if (thread_cpu_seconds() - start > budget) throw LimitHit{"cpu"};
  });

  CoverIndex cover(cfa_.num_locations);
  std::unordered_multimap<std::size_t, std::int32_t> by_explicit;  // (loc, explicit) hash
  Waitlist wait(options_.waitlist, reverse_postorder(cfa_));
  std::vector<bool> waiting;
  std::int32_t error_state = -1;

  auto key = [](const CompositeState& s) {
    return s.expl.hash() * 31 + static_cast<std::size_t>(s.loc);
  };
  auto add = [&](CompositeState s, std::int32_t parent, int edge) {
    auto idx = static_cast<std::int32_t>(reached_.size());
    by_explicit.emplace(key(s), idx);
    cover.insert(s.loc, s.expl, idx);
    reached_.push_back({std::move(s), parent, edge});
    successors_.emplace_back();
    wait.push(idx, reached_.back().state.loc);
    waiting.push_back(true);
    verdict.waitlist_peak = std::max(verdict.waitlist_peak, wait.size());
    return idx;
  };

  try {
    add(domain_->initial(), -1, -1);
    std::size_t iterations = 0;
    while (!wait.empty() && error_state < 0) {
      if ((++iterations & 63) == 0 && thread_cpu_seconds() - start > budget) throw LimitHit{"cpu"};
      const std::int32_t idx = wait.pop();
      waiting[idx] = false;
      const CompositeState cur = reached_[idx].state;

      for (int ei : cfa_.out[cur.loc]) {
        auto succ = domain_->transfer(cur, cfa_.edges[ei]);
        if (!succ) continue;
        std::int32_t target = -1;

        if (cfa_.is_error[succ->loc]) {
          target = add(std::move(*succ), idx, ei);
          successors_[idx].push_back({ei, target});
          error_state = target;
          break;
        }

        // merge with the state holding the same explicit part
        auto range = by_explicit.equal_range(key(*succ));
        for (auto it = range.first; it != range.second && target < 0; ++it) {
          Reached& r = reached_[it->second];
          if (r.state.loc != succ->loc || !(r.state.expl == succ->expl)) continue;
          NodeRef joined = domain_->bdd().join(r.state.bdd, succ->bdd);
          if (joined != r.state.bdd) {
            r.state.bdd = joined;
            if (!waiting[it->second]) {
              waiting[it->second] = true;
              wait.push(it->second, r.state.loc);
            }
          }
          target = it->second;
        }

        // stop when a weaker state already covers it
        if (target < 0) {
          target = cover.find(succ->loc, succ->expl, [&](std::int32_t j) {
            return domain_->covered(*succ, reached_[j].state);
          });
        }

        if (target < 0) {
          if (reached_.size() >= options_.limits.max_states) throw LimitHit{"states"};
          target = add(std::move(*succ), idx, ei);
        }
        successors_[idx].push_back({ei, target});
      }
    }
  } catch (const LimitHit& hit) {
    verdict.outcome = Outcome::Unknown;
    verdict.limit_hit = hit.which;
    verdict.diagnostic = hit.which + " limit reached";
  } catch (const BddError& e) {
    verdict.outcome = Outcome::Unknown;
    verdict.limit_hit = e.kind() == BddError::Kind::ResourceExhausted ? "nodes" : "";
    verdict.diagnostic = e.what();
  }
  store_.set_check_hook(nullptr);

  if (verdict.diagnostic.empty()) {
    if (error_state >= 0) {
      verdict.outcome = Outcome::False;
      verdict.trace = parent_trace(error_state);
      if (options_.confirm) {
        if (auto concrete = confirm(error_state)) {
          verdict.confirmed = true;
          verdict.trace = std::move(*concrete);
        }
      }
    } else {
      verdict.outcome = Outcome::True;
    }
  }
  verdict.cpu_seconds = thread_cpu_seconds() - start;
  verdict.reached_states = reached_.size();
  verdict.bdd_peak_nodes = store_.size();
  verdict.bdd_bits = domain_->bdd().total_bits();
  return verdict;
}

Verdict verify(const Cfa& cfa, const EngineOptions& options) {
  DomainTyping typing = infer(cfa);
  Engine engine(cfa, typing, options);
  return engine.run();
}

}  // namespace domcheck
