#include "domcheck/bdd.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace domcheck {

namespace {

constexpr std::uint32_t kTerminalVar = std::numeric_limits<std::uint32_t>::max();
constexpr std::size_t kHookInterval = 1u << 14;
constexpr std::size_t kMaxCache = 1u << 22;

inline std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

inline std::uint64_t hash3(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  return mix((static_cast<std::uint64_t>(a) << 40) ^ (static_cast<std::uint64_t>(b) << 20) ^ c ^
             (static_cast<std::uint64_t>(c) << 52));
}

}  // namespace

NodeStore::NodeStore(std::uint32_t num_bits, std::size_t node_limit)
    : num_bits_(num_bits), node_limit_(node_limit) {
  nodes_.push_back({kTerminalVar, kFalse, kFalse});
  nodes_.push_back({kTerminalVar, kTrue, kTrue});
  unique_.assign(1u << 12, 0);
  cache_.assign(1u << 16, CacheEntry{});
}

std::uint32_t NodeStore::add_bits(std::uint32_t n) {
  std::uint32_t first = num_bits_;
  num_bits_ += n;
  return first;
}

NodeRef NodeStore::var(std::uint32_t bit) {
  if (bit >= num_bits_)
    throw BddError(BddError::Kind::UnknownVariable, "bit " + std::to_string(bit) + " is not registered");
  return mk(bit, kFalse, kTrue);
}

NodeRef NodeStore::nvar(std::uint32_t bit) {
  if (bit >= num_bits_)
    throw BddError(BddError::Kind::UnknownVariable, "bit " + std::to_string(bit) + " is not registered");
  return mk(bit, kTrue, kFalse);
}

void NodeStore::grow_unique() {
  std::vector<NodeRef> bigger(unique_.size() * 2, 0);
  const std::size_t mask = bigger.size() - 1;
  for (NodeRef r : unique_) {
    if (r == 0) continue;
    const Node& n = nodes_[r];
    std::size_t i = hash3(n.var, n.lo, n.hi) & mask;
    while (bigger[i] != 0) i = (i + 1) & mask;
    bigger[i] = r;
  }
  unique_.swap(bigger);
  if (cache_.size() < kMaxCache && cache_.size() < unique_.size()) {
    cache_.assign(std::min(kMaxCache, unique_.size()), CacheEntry{});
  }
}

NodeRef NodeStore::mk(std::uint32_t v, NodeRef lo, NodeRef hi) {
  if (lo == hi) return lo;
  const std::size_t mask = unique_.size() - 1;
  std::size_t i = hash3(v, lo, hi) & mask;
  while (unique_[i] != 0) {
    const Node& n = nodes_[unique_[i]];
    if (n.var == v && n.lo == lo && n.hi == hi) return unique_[i];
    i = (i + 1) & mask;
  }
  if (nodes_.size() >= node_limit_)
    throw BddError(BddError::Kind::ResourceExhausted,
                   "BDD node limit of " + std::to_string(node_limit_) + " reached");
  NodeRef r = static_cast<NodeRef>(nodes_.size());
  nodes_.push_back({v, lo, hi});
  unique_[i] = r;
  if (nodes_.size() * 2 > unique_.size()) grow_unique();
  if (hook_ && nodes_.size() % kHookInterval == 0) hook_();
  return r;
}

bool NodeStore::cache_lookup(std::uint32_t op, NodeRef a, NodeRef b, NodeRef c,
                             NodeRef& out) const {
  const CacheEntry& e = cache_[(hash3(a, b, c) ^ op * 0x9e3779b97f4a7c15ULL) & (cache_.size() - 1)];
  if (e.op == op && e.a == a && e.b == b && e.c == c) {
    out = e.result;
    return true;
  }
  return false;
}

void NodeStore::cache_store(std::uint32_t op, NodeRef a, NodeRef b, NodeRef c, NodeRef r) {
  CacheEntry& e = cache_[(hash3(a, b, c) ^ op * 0x9e3779b97f4a7c15ULL) & (cache_.size() - 1)];
  e = CacheEntry{op, a, b, c, r};
}

void NodeStore::clear_cache() { std::fill(cache_.begin(), cache_.end(), CacheEntry{}); }

// ---------------------------------------------------------------------------

NodeRef NodeStore::apply(BoolOp op, NodeRef f, NodeRef g) { return apply_rec(op, f, g); }

NodeRef NodeStore::apply_rec(BoolOp op, NodeRef f, NodeRef g) {
  switch (op) {
    case BoolOp::And:
      if (f == kFalse || g == kFalse) return kFalse;
      if (f == kTrue) return g;
      if (g == kTrue || f == g) return f;
      break;
    case BoolOp::Or:
      if (f == kTrue || g == kTrue) return kTrue;
      if (f == kFalse) return g;
      if (g == kFalse || f == g) return f;
      break;
    case BoolOp::Xor:
      if (f == g) return kFalse;
      if (f == kFalse) return g;
      if (g == kFalse) return f;
      if (f == kTrue) return not_rec(g);
      if (g == kTrue) return not_rec(f);
      break;
  }
  if (f > g) std::swap(f, g);
  const std::uint32_t cop = op == BoolOp::And ? kOpAnd : op == BoolOp::Or ? kOpOr : kOpXor;
  NodeRef r;
  if (cache_lookup(cop, f, g, 0, r)) return r;
  const std::uint32_t v = std::min(top(f), top(g));
  NodeRef f0 = top(f) == v ? low(f) : f, f1 = top(f) == v ? high(f) : f;
  NodeRef g0 = top(g) == v ? low(g) : g, g1 = top(g) == v ? high(g) : g;
  NodeRef lo = apply_rec(op, f0, g0);
  NodeRef hi = apply_rec(op, f1, g1);
  r = mk(v, lo, hi);
  cache_store(cop, f, g, 0, r);
  return r;
}

NodeRef NodeStore::negate(NodeRef f) { return not_rec(f); }

NodeRef NodeStore::not_rec(NodeRef f) {
  if (f == kFalse) return kTrue;
  if (f == kTrue) return kFalse;
  NodeRef r;
  if (cache_lookup(kOpNot, f, 0, 0, r)) return r;
  NodeRef lo = not_rec(low(f));
  NodeRef hi = not_rec(high(f));
  r = mk(top(f), lo, hi);
  cache_store(kOpNot, f, 0, 0, r);
  return r;
}

NodeRef NodeStore::ite(NodeRef f, NodeRef g, NodeRef h) { return ite_rec(f, g, h); }

NodeRef NodeStore::ite_rec(NodeRef f, NodeRef g, NodeRef h) {
  if (f == kTrue) return g;
  if (f == kFalse) return h;
  if (g == h) return g;
  if (g == kTrue && h == kFalse) return f;
  if (g == kFalse && h == kTrue) return not_rec(f);
  if (g == kTrue) return apply_rec(BoolOp::Or, f, h);
  if (h == kFalse) return apply_rec(BoolOp::And, f, g);
  NodeRef r;
  if (cache_lookup(kOpIte, f, g, h, r)) return r;
  const std::uint32_t v = std::min({top(f), top(g), top(h)});
  auto co = [&](NodeRef x, bool hi) { return top(x) == v ? (hi ? high(x) : low(x)) : x; };
  NodeRef lo = ite_rec(co(f, false), co(g, false), co(h, false));
  NodeRef hi = ite_rec(co(f, true), co(g, true), co(h, true));
  r = mk(v, lo, hi);
  cache_store(kOpIte, f, g, h, r);
  return r;
}

NodeRef NodeStore::make_cube(std::span<const std::uint32_t> bits) {
  std::vector<std::uint32_t> sorted(bits.begin(), bits.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  NodeRef cube = kTrue;
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (*it >= num_bits_)
      throw BddError(BddError::Kind::UnknownVariable, "bit " + std::to_string(*it) + " is not registered");
    cube = mk(*it, kFalse, cube);
  }
  return cube;
}

NodeRef NodeStore::exists(NodeRef f, std::span<const std::uint32_t> bits) {
  if (bits.empty()) return f;
  return exists_rec(f, make_cube(bits));
}

NodeRef NodeStore::exists_rec(NodeRef f, NodeRef cube) {
  if (is_terminal(f)) return f;
  while (cube != kTrue && top(cube) < top(f)) cube = high(cube);
  if (cube == kTrue) return f;
  NodeRef r;
  if (cache_lookup(kOpExists, f, cube, 0, r)) return r;
  if (top(f) == top(cube)) {
    NodeRef lo = exists_rec(low(f), high(cube));
    r = lo == kTrue ? kTrue : apply_rec(BoolOp::Or, lo, exists_rec(high(f), high(cube)));
  } else {
    NodeRef lo = exists_rec(low(f), cube);
    NodeRef hi = exists_rec(high(f), cube);
    r = mk(top(f), lo, hi);
  }
  cache_store(kOpExists, f, cube, 0, r);
  return r;
}

NodeRef NodeStore::and_exists(NodeRef f, NodeRef g, std::span<const std::uint32_t> bits) {
  if (bits.empty()) return land(f, g);
  return and_exists_rec(f, g, make_cube(bits));
}

NodeRef NodeStore::and_exists_rec(NodeRef f, NodeRef g, NodeRef cube) {
  if (f == kFalse || g == kFalse) return kFalse;
  if (f == kTrue && g == kTrue) return kTrue;
  if (f == kTrue) return exists_rec(g, cube);
  if (g == kTrue || f == g) return exists_rec(f, cube);
  if (f > g) std::swap(f, g);
  const std::uint32_t v = std::min(top(f), top(g));
  while (cube != kTrue && top(cube) < v) cube = high(cube);
  if (cube == kTrue) return apply_rec(BoolOp::And, f, g);
  NodeRef r;
  if (cache_lookup(kOpAndExists, f, g, cube, r)) return r;
  NodeRef f0 = top(f) == v ? low(f) : f, f1 = top(f) == v ? high(f) : f;
  NodeRef g0 = top(g) == v ? low(g) : g, g1 = top(g) == v ? high(g) : g;
  if (top(cube) == v) {
    NodeRef lo = and_exists_rec(f0, g0, high(cube));
    r = lo == kTrue ? kTrue : apply_rec(BoolOp::Or, lo, and_exists_rec(f1, g1, high(cube)));
  } else {
    NodeRef lo = and_exists_rec(f0, g0, cube);
    NodeRef hi = and_exists_rec(f1, g1, cube);
    r = mk(v, lo, hi);
  }
  cache_store(kOpAndExists, f, g, cube, r);
  return r;
}

NodeRef NodeStore::rename(NodeRef f,
                          std::span<const std::pair<std::uint32_t, std::uint32_t>> mapping) {
  if (mapping.empty() || is_terminal(f)) return f;
  std::unordered_map<std::uint32_t, std::uint32_t> to;
  std::unordered_set<std::uint32_t> targets;
  for (auto [from, dst] : mapping) {
    if (from >= num_bits_ || dst >= num_bits_)
      throw BddError(BddError::Kind::UnknownVariable, "rename over unregistered bit");
    if (!to.emplace(from, dst).second || !targets.insert(dst).second)
      throw BddError(BddError::Kind::NonInjectiveRename, "rename map is not injective");
  }
  // a target that stays in the support unrenamed would merge two variables
  for (std::uint32_t b : support(f))
    if (targets.count(b) > 0 && to.count(b) == 0)
      throw BddError(BddError::Kind::NonInjectiveRename,
                     "rename target " + std::to_string(b) + " already occurs in the function");

  std::unordered_map<NodeRef, NodeRef> memo;
  std::function<NodeRef(NodeRef)> rec = [&](NodeRef g) -> NodeRef {
    if (is_terminal(g)) return g;
    auto it = memo.find(g);
    if (it != memo.end()) return it->second;
    NodeRef lo = rec(low(g));
    NodeRef hi = rec(high(g));
    auto m = to.find(top(g));
    std::uint32_t v = m == to.end() ? top(g) : m->second;
    NodeRef r;
    if ((is_terminal(lo) || v < top(lo)) && (is_terminal(hi) || v < top(hi))) r = mk(v, lo, hi);
    else r = ite_rec(mk(v, kFalse, kTrue), hi, lo);
    memo.emplace(g, r);
    return r;
  };
  return rec(f);
}

NodeRef NodeStore::restrict(NodeRef f, std::uint32_t bit, bool value) {
  std::unordered_map<NodeRef, NodeRef> memo;
  std::function<NodeRef(NodeRef)> rec = [&](NodeRef g) -> NodeRef {
    if (is_terminal(g) || top(g) > bit) return g;
    if (top(g) == bit) return value ? high(g) : low(g);
    auto it = memo.find(g);
    if (it != memo.end()) return it->second;
    NodeRef r = mk(top(g), rec(low(g)), rec(high(g)));
    memo.emplace(g, r);
    return r;
  };
  return rec(f);
}

bool NodeStore::entails(NodeRef f, NodeRef g) {
  if (f == kFalse || g == kTrue || f == g) return true;
  return apply(BoolOp::And, f, negate(g)) == kFalse;
}

bool NodeStore::eval(NodeRef f, const std::vector<bool>& assignment) const {
  while (!is_terminal(f)) f = assignment.at(top(f)) ? high(f) : low(f);
  return f == kTrue;
}

std::vector<std::uint32_t> NodeStore::support(NodeRef f) const {
  std::unordered_set<NodeRef> seen;
  std::vector<bool> present(num_bits_, false);
  std::vector<NodeRef> stack{f};
  while (!stack.empty()) {
    NodeRef g = stack.back();
    stack.pop_back();
    if (is_terminal(g) || !seen.insert(g).second) continue;
    present[top(g)] = true;
    stack.push_back(low(g));
    stack.push_back(high(g));
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t b = 0; b < num_bits_; ++b)
    if (present[b]) out.push_back(b);
  return out;
}

bool NodeStore::enumerate(NodeRef f, std::span<const std::uint32_t> bits, std::size_t limit,
                          const std::function<void(const std::vector<bool>&)>& fn) const {
  std::vector<std::uint32_t> order(bits.begin(), bits.end());
  std::sort(order.begin(), order.end());
  std::vector<bool> cur(order.size(), false);
  std::size_t found = 0;
  std::function<bool(NodeRef, std::size_t)> rec = [&](NodeRef g, std::size_t i) -> bool {
    if (g == kFalse) return true;
    if (i == order.size()) {
      if (g != kTrue) throw BddError(BddError::Kind::UnknownVariable,
                                     "enumerate: function depends on bits outside the list");
      if (++found > limit) return false;
      fn(cur);
      return true;
    }
    NodeRef lo = g, hi = g;
    if (!is_terminal(g) && top(g) == order[i]) {
      lo = low(g);
      hi = high(g);
    } else if (!is_terminal(g) && top(g) < order[i]) {
      throw BddError(BddError::Kind::UnknownVariable,
                     "enumerate: function depends on bits outside the list");
    }
    cur[i] = false;
    if (!rec(lo, i + 1)) return false;
    cur[i] = true;
    return rec(hi, i + 1);
  };
  return rec(f, 0);
}

std::size_t NodeStore::dag_size(NodeRef f) const {
  std::unordered_set<NodeRef> seen;
  std::vector<NodeRef> stack{f};
  while (!stack.empty()) {
    NodeRef g = stack.back();
    stack.pop_back();
    if (!seen.insert(g).second || is_terminal(g)) continue;
    stack.push_back(low(g));
    stack.push_back(high(g));
  }
  return seen.size();
}

bool NodeStore::audit() const {
  struct KeyHash {
    std::size_t operator()(const Node& n) const { return hash3(n.var, n.lo, n.hi); }
  };
  struct KeyEq {
    bool operator()(const Node& a, const Node& b) const {
      return a.var == b.var && a.lo == b.lo && a.hi == b.hi;
    }
  };
  std::unordered_set<Node, KeyHash, KeyEq> seen;
  for (std::size_t i = 2; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.lo == n.hi || n.var >= num_bits_) return false;
    if (!is_terminal(n.lo) && top(n.lo) <= n.var) return false;
    if (!is_terminal(n.hi) && top(n.hi) <= n.var) return false;
    if (!seen.insert(n).second) return false;
  }
  return true;
}

void NodeStore::write_dot(std::ostream& os, NodeRef f, const std::string& name,
                          const std::vector<std::string>& bit_names) const {
  os << "digraph \"" << name << "\" {\n";
  os << "  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n";
  std::unordered_set<NodeRef> seen;
  std::vector<NodeRef> stack{f};
  while (!stack.empty()) {
    NodeRef g = stack.back();
    stack.pop_back();
    if (is_terminal(g) || !seen.insert(g).second) continue;
    std::uint32_t lv = top(g);
    std::string label = lv < bit_names.size() ? bit_names[lv] : "b" + std::to_string(lv);
    os << "  n" << g << " [label=\"" << label << "\\nlevel " << lv << "\"];\n";
    os << "  n" << g << " -> n" << low(g) << " [style=dashed];\n";
    os << "  n" << g << " -> n" << high(g) << ";\n";
    stack.push_back(low(g));
    stack.push_back(high(g));
  }
  os << "}\n";
}

}  // namespace domcheck
