#pragma once

// Fixed-width two's complement bit-vectors over BDD bits. Bit 0 is the least
// significant; every operation wraps modulo 2^width.

#include <cstdint>
#include <span>
#include <vector>

#include "domcheck/bdd.hpp"

namespace domcheck::bv {

struct Vec {
  std::vector<NodeRef> bits;  // LSB first
  std::size_t width() const { return bits.size(); }
};

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };

/// Throws WidthOverflow when `value` is outside [-2^(w-1), 2^w - 1].
Vec constant(NodeStore& s, std::int64_t value, std::size_t width);
Vec variable(NodeStore& s, std::span<const std::uint32_t> bits);

Vec add(NodeStore& s, const Vec& a, const Vec& b);
Vec sub(NodeStore& s, const Vec& a, const Vec& b);
Vec neg(NodeStore& s, const Vec& a);
Vec mul(NodeStore& s, const Vec& a, const Vec& b);

Vec bit_and(NodeStore& s, const Vec& a, const Vec& b);
Vec bit_or(NodeStore& s, const Vec& a, const Vec& b);
Vec bit_xor(NodeStore& s, const Vec& a, const Vec& b);
Vec bit_not(NodeStore& s, const Vec& a);

/// Shift by a constant in [0, width); throws ShiftOutOfRange otherwise.
Vec shl_const(NodeStore& s, const Vec& a, std::size_t k);
Vec ashr_const(NodeStore& s, const Vec& a, std::size_t k);
/// Shift by a symbolic amount read as unsigned. Amounts >= width give 0
/// for << and the sign fill for >>.
Vec shl(NodeStore& s, const Vec& a, const Vec& amount);
Vec ashr(NodeStore& s, const Vec& a, const Vec& amount);

/// Truncating signed division and remainder. Both operands must be
/// constrained non-zero by the caller; for b == 0 the result is
/// unspecified. INT_MIN / -1 wraps to INT_MIN.
Vec sdiv(NodeStore& s, const Vec& a, const Vec& b);
Vec srem(NodeStore& s, const Vec& a, const Vec& b);
void udivrem(NodeStore& s, const Vec& a, const Vec& b, Vec& quotient, Vec& remainder);

/// Signed comparison; the result is a single BDD.
NodeRef compare(NodeStore& s, Cmp op, const Vec& a, const Vec& b);
NodeRef is_zero(NodeStore& s, const Vec& a);

Vec ite(NodeStore& s, NodeRef cond, const Vec& a, const Vec& b);

}  // namespace domcheck::bv
