#include "domcheck/bitvec.hpp"

#include <string>

namespace domcheck::bv {

namespace {

void same_width(const Vec& a, const Vec& b) {
  if (a.width() != b.width())
    throw BddError(BddError::Kind::WidthMismatch, "bit-vector widths " + std::to_string(a.width()) +
                                                      " and " + std::to_string(b.width()) + " differ");
}

Vec zeros(std::size_t w) { return Vec{std::vector<NodeRef>(w, kFalse)}; }

/// a + b + carry_in, dropping the final carry.
Vec adder(NodeStore& s, const Vec& a, const Vec& b, NodeRef carry) {
  Vec r;
  r.bits.reserve(a.width());
  for (std::size_t i = 0; i < a.width(); ++i) {
    NodeRef x = s.lxor(a.bits[i], b.bits[i]);
    r.bits.push_back(s.lxor(x, carry));
    if (i + 1 < a.width()) carry = s.lor(s.land(a.bits[i], b.bits[i]), s.land(x, carry));
  }
  return r;
}

/// Unsigned a < b.
NodeRef ult(NodeStore& s, const Vec& a, const Vec& b) {
  NodeRef lt = kFalse;
  for (std::size_t i = 0; i < a.width(); ++i) {
    NodeRef here = s.land(s.negate(a.bits[i]), b.bits[i]);
    NodeRef same = s.iff(a.bits[i], b.bits[i]);
    lt = s.lor(here, s.land(same, lt));
  }
  return lt;
}

NodeRef slt(NodeStore& s, const Vec& a, const Vec& b) {
  const std::size_t w = a.width();
  if (w == 0) return kFalse;
  Vec la{std::vector<NodeRef>(a.bits.begin(), a.bits.end() - 1)};
  Vec lb{std::vector<NodeRef>(b.bits.begin(), b.bits.end() - 1)};
  NodeRef lower = ult(s, la, lb);
  NodeRef sa = a.bits[w - 1], sb = b.bits[w - 1];
  return s.lor(s.land(sa, s.negate(sb)), s.land(s.iff(sa, sb), lower));
}

NodeRef equal(NodeStore& s, const Vec& a, const Vec& b) {
  NodeRef r = kTrue;
  for (std::size_t i = a.width(); i-- > 0;) r = s.land(r, s.iff(a.bits[i], b.bits[i]));
  return r;
}

Vec abs_value(NodeStore& s, const Vec& a) {
  return ite(s, a.bits.back(), neg(s, a), a);
}

}  // namespace

Vec constant(NodeStore&, std::int64_t value, std::size_t width) {
  if (width == 0 || width > 62)
    throw BddError(BddError::Kind::WidthOverflow, "unsupported width " + std::to_string(width));
  const std::int64_t lo = -(std::int64_t{1} << (width - 1));
  const std::int64_t hi = (std::int64_t{1} << width) - 1;
  if (value < lo || value > hi)
    throw BddError(BddError::Kind::WidthOverflow,
                   std::to_string(value) + " does not fit in " + std::to_string(width) + " bits");
  Vec r;
  const auto u = static_cast<std::uint64_t>(value);
  for (std::size_t i = 0; i < width; ++i) r.bits.push_back((u >> i) & 1 ? kTrue : kFalse);
  return r;
}

Vec variable(NodeStore& s, std::span<const std::uint32_t> bits) {
  Vec r;
  r.bits.reserve(bits.size());
  for (std::uint32_t b : bits) r.bits.push_back(s.var(b));
  return r;
}

Vec add(NodeStore& s, const Vec& a, const Vec& b) {
  same_width(a, b);
  return adder(s, a, b, kFalse);
}

Vec sub(NodeStore& s, const Vec& a, const Vec& b) {
  same_width(a, b);
  return adder(s, a, bit_not(s, b), kTrue);
}

Vec neg(NodeStore& s, const Vec& a) { return adder(s, zeros(a.width()), bit_not(s, a), kTrue); }

Vec mul(NodeStore& s, const Vec& a, const Vec& b) {
  same_width(a, b);
  const std::size_t w = a.width();
  Vec acc = zeros(w);
  for (std::size_t i = 0; i < w; ++i) {
    if (b.bits[i] == kFalse) continue;
    Vec partial = zeros(w);
    for (std::size_t j = i; j < w; ++j) partial.bits[j] = s.land(a.bits[j - i], b.bits[i]);
    acc = adder(s, acc, partial, kFalse);
  }
  return acc;
}

Vec bit_and(NodeStore& s, const Vec& a, const Vec& b) {
  same_width(a, b);
  Vec r;
  for (std::size_t i = 0; i < a.width(); ++i) r.bits.push_back(s.land(a.bits[i], b.bits[i]));
  return r;
}

Vec bit_or(NodeStore& s, const Vec& a, const Vec& b) {
  same_width(a, b);
  Vec r;
  for (std::size_t i = 0; i < a.width(); ++i) r.bits.push_back(s.lor(a.bits[i], b.bits[i]));
  return r;
}

Vec bit_xor(NodeStore& s, const Vec& a, const Vec& b) {
  same_width(a, b);
  Vec r;
  for (std::size_t i = 0; i < a.width(); ++i) r.bits.push_back(s.lxor(a.bits[i], b.bits[i]));
  return r;
}

Vec bit_not(NodeStore& s, const Vec& a) {
  Vec r;
  for (NodeRef b : a.bits) r.bits.push_back(s.negate(b));
  return r;
}

Vec shl_const(NodeStore&, const Vec& a, std::size_t k) {
  if (k >= a.width())
    throw BddError(BddError::Kind::ShiftOutOfRange, "shift by " + std::to_string(k));
  Vec r = zeros(a.width());
  for (std::size_t i = k; i < a.width(); ++i) r.bits[i] = a.bits[i - k];
  return r;
}

Vec ashr_const(NodeStore&, const Vec& a, std::size_t k) {
  if (k >= a.width())
    throw BddError(BddError::Kind::ShiftOutOfRange, "shift by " + std::to_string(k));
  Vec r = a;
  const std::size_t w = a.width();
  for (std::size_t i = 0; i < w; ++i) r.bits[i] = i + k < w ? a.bits[i + k] : a.bits[w - 1];
  return r;
}

namespace {

Vec barrel(NodeStore& s, const Vec& a, const Vec& amount, bool left) {
  const std::size_t w = a.width();
  Vec r = a;
  NodeRef overflow = kFalse;
  for (std::size_t k = 0; k < amount.width(); ++k) {
    if (k >= 63 || (std::size_t{1} << k) >= w) {
      overflow = s.lor(overflow, amount.bits[k]);
      continue;
    }
    const std::size_t step = std::size_t{1} << k;
    Vec shifted = left ? shl_const(s, r, step) : ashr_const(s, r, step);
    r = ite(s, amount.bits[k], shifted, r);
  }
  Vec fill = left ? zeros(w) : Vec{std::vector<NodeRef>(w, a.bits[w - 1])};
  return ite(s, overflow, fill, r);
}

}  // namespace

Vec shl(NodeStore& s, const Vec& a, const Vec& amount) { return barrel(s, a, amount, true); }
Vec ashr(NodeStore& s, const Vec& a, const Vec& amount) { return barrel(s, a, amount, false); }

void udivrem(NodeStore& s, const Vec& a, const Vec& b, Vec& quotient, Vec& remainder) {
  same_width(a, b);
  const std::size_t w = a.width();
  // remainder carries one extra bit so the shift never loses the top bit
  Vec rem = zeros(w + 1);
  Vec divisor = b;
  divisor.bits.push_back(kFalse);
  quotient = zeros(w);
  for (std::size_t i = w; i-- > 0;) {
    for (std::size_t j = w; j > 0; --j) rem.bits[j] = rem.bits[j - 1];
    rem.bits[0] = a.bits[i];
    NodeRef ge = s.negate(ult(s, rem, divisor));
    quotient.bits[i] = ge;
    rem = ite(s, ge, sub(s, rem, divisor), rem);
  }
  rem.bits.pop_back();
  remainder = rem;
}

Vec sdiv(NodeStore& s, const Vec& a, const Vec& b) {
  same_width(a, b);
  Vec q, r;
  udivrem(s, abs_value(s, a), abs_value(s, b), q, r);
  NodeRef flip = s.lxor(a.bits.back(), b.bits.back());
  return ite(s, flip, neg(s, q), q);
}

Vec srem(NodeStore& s, const Vec& a, const Vec& b) {
  same_width(a, b);
  Vec q, r;
  udivrem(s, abs_value(s, a), abs_value(s, b), q, r);
  return ite(s, a.bits.back(), neg(s, r), r);
}

NodeRef compare(NodeStore& s, Cmp op, const Vec& a, const Vec& b) {
  same_width(a, b);
  switch (op) {
    case Cmp::Eq: return equal(s, a, b);
    case Cmp::Ne: return s.negate(equal(s, a, b));
    case Cmp::Lt: return slt(s, a, b);
    case Cmp::Gt: return slt(s, b, a);
    case Cmp::Le: return s.negate(slt(s, b, a));
    case Cmp::Ge: return s.negate(slt(s, a, b));
  }
  return kFalse;
}

NodeRef is_zero(NodeStore& s, const Vec& a) {
  NodeRef r = kTrue;
  for (std::size_t i = a.width(); i-- > 0;) r = s.land(r, s.negate(a.bits[i]));
  return r;
}

Vec ite(NodeStore& s, NodeRef cond, const Vec& a, const Vec& b) {
  same_width(a, b);
  if (cond == kTrue) return a;
  if (cond == kFalse) return b;
  Vec r;
  r.bits.reserve(a.width());
  for (std::size_t i = 0; i < a.width(); ++i) r.bits.push_back(s.ite(cond, a.bits[i], b.bits[i]));
  return r;
}

}  // namespace domcheck::bv
