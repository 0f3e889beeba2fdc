#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "domcheck/bdd.hpp"
#include "domcheck/bitvec.hpp"
#include "domcheck/domtype.hpp"
#include "domcheck/explicit_domain.hpp"

namespace domcheck {

enum class LayoutKind : std::uint8_t { Bool1, IntEqCompact, Full };

const char* to_string(LayoutKind k);

/// Bits of one BDD-tracked variable. Plain and primed bits are interleaved in
/// the variable order so x' = f(x) relations stay small.
struct BitLayout {
  VarId var = kNoVar;
  LayoutKind kind = LayoutKind::Full;
  std::vector<std::uint32_t> bits;    // Bool1: the truth bit; IntEqCompact: code, LSB first; Full: value, LSB first
  std::vector<std::uint32_t> primed;  // same shape as `bits`
  std::vector<std::int32_t> values;   // IntEqCompact: code i stands for values[i] (ascending)
  std::uint32_t extra = 0;            // IntEqCompact: set when the value is outside `values`
  std::uint32_t extra_primed = 0;

  /// Bits in the state predicate (primed shadow bits not counted).
  std::size_t num_bits() const { return bits.size() + (kind == LayoutKind::IntEqCompact ? 1 : 0); }
};

/// Number of code bits for an IntEq value set of size n.
std::size_t code_bits(std::size_t n);

struct BddOptions {
  unsigned width = 32;                 // Full layouts; below 32 only for tests
  std::vector<VarId> order;            // variable order; empty = declaration order
};

/// Explicit-side constant of a variable the BDD does not track.
using ForeignLookup = std::function<std::optional<std::int32_t>(VarId)>;

class BddDomain {
 public:
  BddDomain(NodeStore& store, const Cfa& cfa, const DomainTyping& typing,
            const Precision& tracked, BddOptions opt = {});

  NodeStore& store() { return store_; }
  unsigned width() const { return width_; }
  bool tracks(VarId v) const { return layouts_[v].has_value(); }
  const std::optional<BitLayout>& layout(VarId v) const { return layouts_[v]; }
  std::size_t total_bits() const { return total_bits_; }

  /// Every tracked variable unconstrained (IntEq codes kept valid).
  NodeRef initial() const { return initial_; }

  NodeRef assign(NodeRef s, VarId v, const Expr* e, const ForeignLookup& foreign);
  NodeRef havoc(NodeRef s, VarId v);
  NodeRef assume(NodeRef s, const Expr& e, bool polarity, const ForeignLookup& foreign);

  NodeRef join(NodeRef a, NodeRef b) { return store_.lor(a, b); }
  bool entails(NodeRef a, NodeRef b) { return store_.entails(a, b); }

  /// Predicate "v == c" over the plain bits of a tracked variable.
  NodeRef equals_constant(VarId v, std::int64_t c);

  /// Tracked variable owning `bit`, kNoVar for scratch bits.
  VarId owner(std::uint32_t bit) const;
  bool is_primed(std::uint32_t bit) const;

  /// Decodes v from a full assignment to the state bits. Bool1 reports 0 or 1
  /// (truthiness), IntEqCompact reports nullopt when the extra bit is set.
  std::optional<std::int64_t> decode(VarId v, const std::vector<bool>& assignment) const;

  std::vector<std::string> bit_names() const;
  void write_dot(std::ostream& os, NodeRef s, const std::string& name) const;

 private:
  struct Encoder;

  NodeRef validity(const BitLayout& l, bool primed);
  bv::Vec fresh_vec();
  std::uint32_t fresh_bit();
  void reset_scratch();
  NodeRef finish(NodeRef s, const std::vector<NodeRef>& conjuncts, std::vector<std::uint32_t> quantify);

  NodeStore& store_;
  const Cfa& cfa_;
  unsigned width_;
  std::vector<std::optional<BitLayout>> layouts_;
  std::vector<VarId> owner_;        // by bit; kNoVar for scratch
  std::vector<bool> primed_bit_;
  std::size_t total_bits_ = 0;
  std::uint32_t layout_end_ = 0;    // first scratch bit
  std::uint32_t scratch_next_ = 0;
  NodeRef initial_ = kTrue;
};

}  // namespace domcheck
