#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace domcheck {

using NodeRef = std::uint32_t;
constexpr NodeRef kFalse = 0;
constexpr NodeRef kTrue = 1;

enum class BoolOp : std::uint8_t { And, Or, Xor };

class BddError : public std::runtime_error {
 public:
  enum class Kind {
    UnknownVariable,
    NonInjectiveRename,
    WidthOverflow,
    WidthMismatch,
    ShiftOutOfRange,
    ResourceExhausted,
  };
  BddError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Hash-consed ROBDD store. Bit index == level: bit 0 is tested first.
/// Nodes are append-only; a store belongs to one verification run and must
/// not be used from two threads at once.
class NodeStore {
 public:
  static constexpr std::size_t kDefaultNodeLimit = 50'000'000;

  explicit NodeStore(std::uint32_t num_bits = 0, std::size_t node_limit = kDefaultNodeLimit);

  /// Registers `n` more bits at the bottom of the order; returns the first.
  std::uint32_t add_bits(std::uint32_t n);
  std::uint32_t num_bits() const { return num_bits_; }

  NodeRef var(std::uint32_t bit);
  NodeRef nvar(std::uint32_t bit);

  NodeRef apply(BoolOp op, NodeRef f, NodeRef g);
  NodeRef land(NodeRef f, NodeRef g) { return apply(BoolOp::And, f, g); }
  NodeRef lor(NodeRef f, NodeRef g) { return apply(BoolOp::Or, f, g); }
  NodeRef lxor(NodeRef f, NodeRef g) { return apply(BoolOp::Xor, f, g); }
  NodeRef iff(NodeRef f, NodeRef g) { return negate(lxor(f, g)); }
  NodeRef negate(NodeRef f);
  NodeRef ite(NodeRef f, NodeRef g, NodeRef h);

  /// Existential quantification over `bits`.
  NodeRef exists(NodeRef f, std::span<const std::uint32_t> bits);
  /// exists(f & g, bits) without building f & g.
  NodeRef and_exists(NodeRef f, NodeRef g, std::span<const std::uint32_t> bits);
  /// Simultaneous substitution of bit variables. Throws NonInjectiveRename
  /// when two distinct bits of f's support would collapse onto one.
  NodeRef rename(NodeRef f, std::span<const std::pair<std::uint32_t, std::uint32_t>> mapping);
  /// Cofactor f|bit=value.
  NodeRef restrict(NodeRef f, std::uint32_t bit, bool value);

  /// f -> g is valid.
  bool entails(NodeRef f, NodeRef g);

  bool eval(NodeRef f, const std::vector<bool>& assignment) const;
  std::vector<std::uint32_t> support(NodeRef f) const;

  /// Calls `fn` for every assignment to `bits` (ascending) satisfying f,
  /// where f's support must lie inside `bits`. Stops and returns false once
  /// more than `limit` assignments were found.
  bool enumerate(NodeRef f, std::span<const std::uint32_t> bits, std::size_t limit,
                 const std::function<void(const std::vector<bool>&)>& fn) const;

  bool is_terminal(NodeRef f) const { return f <= kTrue; }
  std::uint32_t level(NodeRef f) const { return nodes_[f].var; }
  NodeRef low(NodeRef f) const { return nodes_[f].lo; }
  NodeRef high(NodeRef f) const { return nodes_[f].hi; }

  std::size_t size() const { return nodes_.size(); }
  std::size_t node_limit() const { return node_limit_; }
  /// Number of nodes reachable from f, terminals included.
  std::size_t dag_size(NodeRef f) const;

  void clear_cache();
  /// Invoked every few thousand node allocations; may throw to abort a run.
  void set_check_hook(std::function<void()> hook) { hook_ = std::move(hook); }

  /// Reducedness and orderedness audit over the whole table.
  bool audit() const;

  void write_dot(std::ostream& os, NodeRef f, const std::string& name,
                 const std::vector<std::string>& bit_names = {}) const;

 private:
  struct Node {
    std::uint32_t var;
    NodeRef lo;
    NodeRef hi;
  };

  struct CacheEntry {
    std::uint32_t op = 0;  // 0 = empty
    NodeRef a = 0, b = 0, c = 0;
    NodeRef result = 0;
  };

  enum CacheOp : std::uint32_t {
    kOpAnd = 1, kOpOr, kOpXor, kOpNot, kOpIte, kOpExists, kOpAndExists,
  };

  NodeRef mk(std::uint32_t var, NodeRef lo, NodeRef hi);
  void grow_unique();
  std::uint32_t top(NodeRef f) const { return nodes_[f].var; }

  bool cache_lookup(std::uint32_t op, NodeRef a, NodeRef b, NodeRef c, NodeRef& out) const;
  void cache_store(std::uint32_t op, NodeRef a, NodeRef b, NodeRef c, NodeRef r);

  NodeRef apply_rec(BoolOp op, NodeRef f, NodeRef g);
  NodeRef not_rec(NodeRef f);
  NodeRef ite_rec(NodeRef f, NodeRef g, NodeRef h);
  NodeRef exists_rec(NodeRef f, NodeRef cube);
  NodeRef and_exists_rec(NodeRef f, NodeRef g, NodeRef cube);
  NodeRef make_cube(std::span<const std::uint32_t> bits);

  std::vector<Node> nodes_;
  std::vector<NodeRef> unique_;   // open addressing, 0 = empty slot
  std::vector<CacheEntry> cache_;
  std::uint32_t num_bits_ = 0;
  std::size_t node_limit_;
  std::function<void()> hook_;
};

}  // namespace domcheck
