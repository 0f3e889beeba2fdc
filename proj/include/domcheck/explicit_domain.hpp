#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "domcheck/cfa.hpp"

namespace domcheck {

/// Variables tracked by a domain, indexed by VarId.
using Precision = std::vector<bool>;

/// Partial valuation. An absent variable may hold any value.
class ExplicitState {
 public:
  static ExplicitState top() { return ExplicitState(); }
  static ExplicitState bottom() {
    ExplicitState s;
    s.bottom_ = true;
    return s;
  }

  bool is_bottom() const { return bottom_; }
  std::optional<std::int32_t> get(VarId v) const;
  void set(VarId v, std::int32_t value);
  void erase(VarId v);
  const std::vector<std::pair<VarId, std::int32_t>>& bindings() const { return map_; }
  std::size_t size() const { return map_.size(); }
  std::size_t hash() const;

  /// Renders as `{var=value, ...}`.
  std::string to_string(const std::vector<std::string>& names) const;

  friend bool operator==(const ExplicitState&, const ExplicitState&) = default;

 private:
  std::vector<std::pair<VarId, std::int32_t>> map_;  // sorted by VarId
  bool bottom_ = false;
};

/// Wrapping 32-bit evaluation; nullopt when the value depends on an absent
/// variable, on nondet, or on a division by zero.
std::optional<std::int32_t> eval(const ExplicitState& s, const Expr& e);

ExplicitState assign(const ExplicitState& s, VarId v, const Expr* e, const Precision& prec);
ExplicitState assume(const ExplicitState& s, const Expr& e, bool polarity, const Precision& prec);
ExplicitState transfer(const ExplicitState& s, const CfaEdge& edge, const Precision& prec);

/// s1 is covered by s2: every binding of s2 also occurs in s1.
bool subsumes(const ExplicitState& s1, const ExplicitState& s2);

namespace arith {
// 32-bit two's complement helpers shared by the explicit domain and traces
std::int32_t add(std::int32_t a, std::int32_t b);
std::int32_t sub(std::int32_t a, std::int32_t b);
std::int32_t mul(std::int32_t a, std::int32_t b);
/// b != 0 required. INT_MIN / -1 wraps to INT_MIN, INT_MIN % -1 is 0.
std::int32_t div(std::int32_t a, std::int32_t b);
std::int32_t mod(std::int32_t a, std::int32_t b);
/// The amount is read as unsigned; amounts >= 32 shift everything out.
std::int32_t shl(std::int32_t a, std::int32_t amount);
std::int32_t shr(std::int32_t a, std::int32_t amount);
}  // namespace arith

}  // namespace domcheck
