#include "domcheck/bdd_domain.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>

namespace domcheck {

namespace {

constexpr std::size_t kEnumerateLimit = 16;

bool is_const_vec(const bv::Vec& v) {
  return std::all_of(v.bits.begin(), v.bits.end(), [](NodeRef b) { return b <= kTrue; });
}

std::int64_t const_value(const bv::Vec& v) {
  std::uint64_t u = 0;
  for (std::size_t i = 0; i < v.width(); ++i)
    if (v.bits[i] == kTrue) u |= std::uint64_t{1} << i;
  const std::size_t w = v.width();
  if (w < 64 && ((u >> (w - 1)) & 1)) return static_cast<std::int64_t>(u) - (std::int64_t{1} << w);
  return static_cast<std::int64_t>(u);
}

}  // namespace

const char* to_string(LayoutKind k) {
  switch (k) {
    case LayoutKind::Bool1: return "Bool1";
    case LayoutKind::IntEqCompact: return "IntEqCompact";
    case LayoutKind::Full: return "Full";
  }
  return "?";
}

std::size_t code_bits(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < std::max<std::size_t>(n, 2)) ++bits;
  return bits;
}

BddDomain::BddDomain(NodeStore& store, const Cfa& cfa, const DomainTyping& typing,
                     const Precision& tracked, BddOptions opt)
    : store_(store), cfa_(cfa), width_(opt.width), layouts_(cfa.num_vars()) {
  std::vector<VarId> order = opt.order;
  if (order.empty())
    for (VarId v = 0; v < static_cast<VarId>(cfa.num_vars()); ++v) order.push_back(v);

  auto claim = [&](VarId v, bool primed) {
    std::uint32_t b = store_.add_bits(1);
    owner_.push_back(v);
    primed_bit_.push_back(primed);
    return b;
  };

  for (VarId v : order) {
    if (!tracked[v]) continue;
    BitLayout l;
    l.var = v;
    std::size_t n = 0;
    switch (typing.type_of[v]) {
      case DomainType::Bool:
        l.kind = LayoutKind::Bool1;
        n = 1;
        break;
      case DomainType::IntEq:
        l.kind = LayoutKind::IntEqCompact;
        l.values = typing.value_set[v];
        n = code_bits(l.values.size());
        break;
      default:
        l.kind = LayoutKind::Full;
        n = width_;
        break;
    }
    if (l.kind == LayoutKind::IntEqCompact) {
      // extra bit first: it decides how the code is read
      l.extra = claim(v, false);
      l.extra_primed = claim(v, true);
    }
    for (std::size_t i = 0; i < n; ++i) {
      l.bits.push_back(claim(v, false));
      l.primed.push_back(claim(v, true));
    }
    total_bits_ += l.num_bits();
    layouts_[v] = std::move(l);
  }
  layout_end_ = store_.num_bits();
  scratch_next_ = layout_end_;

  for (const auto& l : layouts_)
    if (l && l->kind == LayoutKind::IntEqCompact) initial_ = store_.land(initial_, validity(*l, false));
}

NodeRef BddDomain::validity(const BitLayout& l, bool primed) {
  const auto& bits = primed ? l.primed : l.bits;
  const std::uint32_t extra = primed ? l.extra_primed : l.extra;
  // code < n, compared from the most significant bit down
  const std::uint64_t n = l.values.size();
  NodeRef lt = kFalse;
  NodeRef eq = kTrue;
  for (std::size_t i = bits.size(); i-- > 0;) {
    const bool nb = (n >> i) & 1;
    NodeRef b = store_.var(bits[i]);
    if (nb) {
      lt = store_.lor(lt, store_.land(eq, store_.negate(b)));
      eq = store_.land(eq, b);
    } else {
      eq = store_.land(eq, store_.negate(b));
    }
  }
  if ((n >> bits.size()) != 0) lt = kTrue;  // n == 2^bits
  return store_.lor(store_.var(extra), lt);
}

std::uint32_t BddDomain::fresh_bit() {
  if (scratch_next_ == store_.num_bits()) {
    store_.add_bits(1);
    owner_.push_back(kNoVar);
    primed_bit_.push_back(false);
  }
  return scratch_next_++;
}

bv::Vec BddDomain::fresh_vec() {
  bv::Vec v;
  for (unsigned i = 0; i < width_; ++i) v.bits.push_back(store_.var(fresh_bit()));
  return v;
}

void BddDomain::reset_scratch() { scratch_next_ = layout_end_; }

VarId BddDomain::owner(std::uint32_t bit) const {
  return bit < owner_.size() ? owner_[bit] : kNoVar;
}

bool BddDomain::is_primed(std::uint32_t bit) const {
  return bit < primed_bit_.size() && primed_bit_[bit];
}

NodeRef BddDomain::equals_constant(VarId v, std::int64_t c) {
  const BitLayout& l = *layouts_[v];
  switch (l.kind) {
    case LayoutKind::Bool1:
      if (c == 0) return store_.nvar(l.bits[0]);
      return c == 1 ? store_.var(l.bits[0]) : kFalse;
    case LayoutKind::IntEqCompact: {
      auto it = std::find(l.values.begin(), l.values.end(), c);
      if (it == l.values.end()) return kFalse;
      auto code = static_cast<std::uint64_t>(it - l.values.begin());
      NodeRef r = store_.nvar(l.extra);
      for (std::size_t i = 0; i < l.bits.size(); ++i)
        r = store_.land(r, (code >> i) & 1 ? store_.var(l.bits[i]) : store_.nvar(l.bits[i]));
      return r;
    }
    case LayoutKind::Full: {
      std::vector<std::uint32_t> bits = l.bits;
      const std::uint64_t mask = width_ >= 64 ? ~0ULL : (std::uint64_t{1} << width_) - 1;
      return bv::compare(store_, bv::Cmp::Eq, bv::variable(store_, bits),
                         bv::constant(store_, static_cast<std::int64_t>(static_cast<std::uint64_t>(c) & mask), width_));
    }
  }
  return kFalse;
}

// ---------------------------------------------------------------------------
// Expression encoding. Scratch bits introduced here are quantified away by
// the caller before the result becomes a state.

struct BddDomain::Encoder {
  BddDomain& d;
  NodeStore& s;
  NodeRef state;
  const ForeignLookup& foreign;
  NodeRef side = kTrue;  // constraints over scratch bits
  std::map<VarId, bv::Vec> full_reads;

  Encoder(BddDomain& dom, NodeRef st, const ForeignLookup& f)
      : d(dom), s(dom.store_), state(st), foreign(f) {}

  bv::Vec constant(std::int64_t c) {
    const std::uint64_t mask = d.width_ >= 64 ? ~0ULL : (std::uint64_t{1} << d.width_) - 1;
    return bv::constant(s, static_cast<std::int64_t>(static_cast<std::uint64_t>(c) & mask), d.width_);
  }

  bv::Vec from_pred(NodeRef p) { return bv::ite(s, p, constant(1), constant(0)); }

  bv::Vec code_vec(const BitLayout& l) {
    bv::Vec v;
    for (auto b : l.bits) v.bits.push_back(s.var(b));
    return v;
  }

  NodeRef code_is(const BitLayout& l, std::size_t code) {
    NodeRef r = kTrue;
    for (std::size_t i = 0; i < l.bits.size(); ++i)
      r = s.land(r, (code >> i) & 1 ? s.var(l.bits[i]) : s.nvar(l.bits[i]));
    return r;
  }

  bv::Vec variable(VarId v) {
    if (!d.tracks(v)) {
      if (foreign)
        if (auto c = foreign(v)) return constant(*c);
      return d.fresh_vec();
    }
    const BitLayout& l = *d.layouts_[v];
    switch (l.kind) {
      case LayoutKind::Full: {
        // Exact within the state: a variable with few feasible values reads
        // as a case split over constants, which keeps relations between
        // distant bit blocks small.
        auto memo = full_reads.find(v);
        if (memo != full_reads.end()) return memo->second;
        bv::Vec raw = bv::variable(s, l.bits);
        bv::Vec r = raw;
        if (auto ks = possible_values(raw); ks && !ks->empty()) {
          r = constant(ks->back());
          for (std::size_t i = ks->size() - 1; i-- > 0;)
            r = bv::ite(s, bv::compare(s, bv::Cmp::Eq, raw, constant((*ks)[i])), constant((*ks)[i]), r);
        }
        full_reads.emplace(v, r);
        return r;
      }
      case LayoutKind::Bool1: {
        // only truthiness is stored: a set bit stands for some non-zero value
        bv::Vec f = d.fresh_vec();
        side = s.land(side, s.ite(s.var(l.bits[0]), s.negate(bv::is_zero(s, f)), kTrue));
        return bv::ite(s, s.var(l.bits[0]), f, constant(0));
      }
      case LayoutKind::IntEqCompact: {
        bv::Vec outside = d.fresh_vec();
        NodeRef not_member = kTrue;
        for (auto c : l.values) not_member = s.land(not_member, s.negate(bv::compare(s, bv::Cmp::Eq, outside, constant(c))));
        side = s.land(side, s.ite(s.var(l.extra), not_member, kTrue));
        bv::Vec r = outside;
        for (std::size_t i = l.values.size(); i-- > 0;)
          r = bv::ite(s, s.land(s.nvar(l.extra), code_is(l, i)), constant(l.values[i]), r);
        return r;
      }
    }
    return d.fresh_vec();
  }

  /// Values the vector can take in the current state, if few. Splits on one
  /// result bit at a time so no relation between distant bits is built.
  std::optional<std::vector<std::int64_t>> possible_values(const bv::Vec& v) {
    if (is_const_vec(v)) return std::vector<std::int64_t>{const_value(v)};
    std::vector<std::int64_t> out;
    bv::Vec cur;
    cur.bits.assign(v.width(), kFalse);
    bool overflow = false;
    std::function<void(NodeRef, std::size_t)> split = [&](NodeRef cond, std::size_t i) {
      if (overflow || cond == kFalse) return;
      if (i == v.width()) {
        if (out.size() == kEnumerateLimit) overflow = true;
        else out.push_back(const_value(cur));
        return;
      }
      cur.bits[i] = kFalse;
      split(s.land(cond, s.negate(v.bits[i])), i + 1);
      cur.bits[i] = kTrue;
      split(s.land(cond, v.bits[i]), i + 1);
    };
    split(s.land(state, side), 0);
    if (overflow) return std::nullopt;
    return out;
  }

  /// Builds op(a, k) for each feasible value k of b.
  template <typename F>
  std::optional<bv::Vec> by_cases(const bv::Vec& b, F&& op) {
    auto ks = possible_values(b);
    if (!ks) return std::nullopt;
    if (ks->empty()) return constant(0);  // infeasible state; any value works
    bv::Vec r = op(ks->back());
    for (std::size_t i = ks->size() - 1; i-- > 0;) {
      NodeRef hit = bv::compare(s, bv::Cmp::Eq, b, constant((*ks)[i]));
      r = bv::ite(s, hit, op((*ks)[i]), r);
    }
    return r;
  }

  bv::Vec shift(const bv::Vec& a, const bv::Vec& amount, bool left) {
    auto by_const = [&](std::int64_t k) {
      const auto u = static_cast<std::uint64_t>(k) & ((d.width_ >= 64 ? 0 : (std::uint64_t{1} << d.width_)) - 1);
      if (u >= d.width_) return left ? constant(0) : bv::ite(s, a.bits.back(), constant(-1), constant(0));
      return left ? bv::shl_const(s, a, u) : bv::ashr_const(s, a, u);
    };
    if (auto r = by_cases(amount, by_const)) return *r;
    return left ? bv::shl(s, a, amount) : bv::ashr(s, a, amount);
  }

  bv::Vec num(const Expr& e) {
    if (e.is_boolean_valued() && e.kind != Expr::Kind::Const) return from_pred(pred(e));
    switch (e.kind) {
      case Expr::Kind::Const: return constant(e.value);
      case Expr::Kind::Var: return variable(e.var);
      case Expr::Kind::Nondet: return d.fresh_vec();
      case Expr::Kind::Unary: return bv::bit_not(s, num(*e.lhs));
      case Expr::Kind::Binary: break;
    }
    bv::Vec a = num(*e.lhs);
    bv::Vec b = num(*e.rhs);
    switch (e.bop) {
      case BinOp::Add: return bv::add(s, a, b);
      case BinOp::Sub: return bv::sub(s, a, b);
      case BinOp::BitAnd: return bv::bit_and(s, a, b);
      case BinOp::BitOr: return bv::bit_or(s, a, b);
      case BinOp::BitXor: return bv::bit_xor(s, a, b);
      case BinOp::Shl: return shift(a, b, true);
      case BinOp::Shr: return shift(a, b, false);
      case BinOp::Mul: {
        if (is_const_vec(a)) return bv::mul(s, b, a);
        if (is_const_vec(b)) return bv::mul(s, a, b);
        if (auto r = by_cases(b, [&](std::int64_t k) { return bv::mul(s, a, constant(k)); })) return *r;
        if (auto r = by_cases(a, [&](std::int64_t k) { return bv::mul(s, b, constant(k)); })) return *r;
        return bv::mul(s, a, b);
      }
      case BinOp::Div:
      case BinOp::Mod: {
        const bool is_div = e.bop == BinOp::Div;
        auto op = [&](std::int64_t k) {
          if (k == 0) return d.fresh_vec();  // no trap semantics: any value
          bv::Vec kv = constant(k);
          return is_div ? bv::sdiv(s, a, kv) : bv::srem(s, a, kv);
        };
        if (auto r = by_cases(b, op)) return *r;
        return d.fresh_vec();
      }
      default: break;
    }
    return d.fresh_vec();
  }

  std::optional<std::int64_t> as_constant(const Expr& e) {
    if (e.kind == Expr::Kind::Const) return e.value;
    if (e.kind == Expr::Kind::Var && !d.tracks(e.var) && foreign)
      if (auto c = foreign(e.var)) return *c;
    return std::nullopt;
  }

  /// v == c for a tracked variable, sound for every layout.
  NodeRef var_equals(const BitLayout& l, std::int64_t c) {
    switch (l.kind) {
      case LayoutKind::Bool1:
        if (c == 0) return s.nvar(l.bits[0]);
        return s.land(s.var(l.bits[0]), s.var(d.fresh_bit()));
      case LayoutKind::IntEqCompact: {
        auto it = std::find(l.values.begin(), l.values.end(), c);
        if (it == l.values.end()) return s.land(s.var(l.extra), s.var(d.fresh_bit()));
        return s.land(s.nvar(l.extra), code_is(l, static_cast<std::size_t>(it - l.values.begin())));
      }
      case LayoutKind::Full:
        return bv::compare(s, bv::Cmp::Eq, bv::variable(s, l.bits), constant(c));
    }
    return kFalse;
  }

  std::optional<NodeRef> equality_fast(const Expr& l, const Expr& r) {
    const BitLayout* lv = l.kind == Expr::Kind::Var && d.tracks(l.var) ? &*d.layouts_[l.var] : nullptr;
    const BitLayout* rv = r.kind == Expr::Kind::Var && d.tracks(r.var) ? &*d.layouts_[r.var] : nullptr;
    if (lv && !rv)
      if (auto c = as_constant(r)) return var_equals(*lv, *c);
    if (rv && !lv)
      if (auto c = as_constant(l)) return var_equals(*rv, *c);
    if (lv && rv && lv->kind == rv->kind) {
      if (lv->kind == LayoutKind::Bool1) {
        NodeRef a = s.var(lv->bits[0]), b = s.var(rv->bits[0]);
        if (lv == rv) return kTrue;
        return s.lor(s.land(s.negate(a), s.negate(b)), s.land(s.land(a, b), s.var(d.fresh_bit())));
      }
      if (lv->kind == LayoutKind::IntEqCompact && lv->values == rv->values) {
        if (lv == rv) return kTrue;
        NodeRef same = bv::compare(s, bv::Cmp::Eq, code_vec(*lv), code_vec(*rv));
        NodeRef inside = s.land(s.land(s.nvar(lv->extra), s.nvar(rv->extra)), same);
        NodeRef outside = s.land(s.land(s.var(lv->extra), s.var(rv->extra)), s.var(d.fresh_bit()));
        return s.lor(inside, outside);
      }
    }
    return std::nullopt;
  }

  /// Truth value of e (e != 0).
  NodeRef pred(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Const: return e.value != 0 ? kTrue : kFalse;
      case Expr::Kind::Nondet: return s.var(d.fresh_bit());
      case Expr::Kind::Var:
        if (d.tracks(e.var) && d.layouts_[e.var]->kind == LayoutKind::Bool1)
          return s.var(d.layouts_[e.var]->bits[0]);
        if (d.tracks(e.var) && d.layouts_[e.var]->kind == LayoutKind::IntEqCompact) {
          const BitLayout& l = *d.layouts_[e.var];
          return s.negate(var_equals(l, 0));
        }
        return s.negate(bv::is_zero(s, num(e)));
      case Expr::Kind::Unary:
        if (e.uop == UnOp::Not) return s.negate(pred(*e.lhs));
        return s.negate(bv::is_zero(s, num(e)));
      case Expr::Kind::Binary: break;
    }
    switch (e.bop) {
      case BinOp::LogAnd: return s.land(pred(*e.lhs), pred(*e.rhs));
      case BinOp::LogOr: return s.lor(pred(*e.lhs), pred(*e.rhs));
      case BinOp::Eq:
      case BinOp::Ne: {
        NodeRef eq;
        if (auto f = equality_fast(*e.lhs, *e.rhs)) eq = *f;
        else eq = bv::compare(s, bv::Cmp::Eq, num(*e.lhs), num(*e.rhs));
        return e.bop == BinOp::Eq ? eq : s.negate(eq);
      }
      case BinOp::Lt: return bv::compare(s, bv::Cmp::Lt, num(*e.lhs), num(*e.rhs));
      case BinOp::Gt: return bv::compare(s, bv::Cmp::Gt, num(*e.lhs), num(*e.rhs));
      case BinOp::Le: return bv::compare(s, bv::Cmp::Le, num(*e.lhs), num(*e.rhs));
      case BinOp::Ge: return bv::compare(s, bv::Cmp::Ge, num(*e.lhs), num(*e.rhs));
      default: return s.negate(bv::is_zero(s, num(e)));
    }
  }
};

NodeRef BddDomain::finish(NodeRef s, const std::vector<NodeRef>& conjuncts, std::vector<std::uint32_t> quantify) {
  for (std::uint32_t b = layout_end_; b < scratch_next_; ++b) quantify.push_back(b);
  // Early quantification: each bit goes as soon as no later conjunct
  // mentions it, so x' == fresh never materialises across distant blocks.
  std::vector<int> last(store_.num_bits(), -1);
  std::vector<bool> wanted(store_.num_bits(), false);
  for (auto b : quantify) wanted[b] = true;
  for (std::size_t k = 0; k < conjuncts.size(); ++k)
    for (auto b : store_.support(conjuncts[k])) last[b] = static_cast<int>(k);
  std::vector<std::vector<std::uint32_t>> drop(conjuncts.size() + 1);
  for (auto b : quantify) drop[static_cast<std::size_t>(last[b] + 1)].push_back(b);
  NodeRef r = store_.exists(s, drop[0]);
  for (std::size_t k = 0; k < conjuncts.size() && r != kFalse; ++k)
    r = store_.and_exists(r, conjuncts[k], drop[k + 1]);
  reset_scratch();
  return r;
}

NodeRef BddDomain::havoc(NodeRef s, VarId v) {
  if (!tracks(v) || s == kFalse) return s;
  const BitLayout& l = *layouts_[v];
  std::vector<std::uint32_t> bits = l.bits;
  if (l.kind == LayoutKind::IntEqCompact) bits.push_back(l.extra);
  NodeRef r = store_.exists(s, bits);
  if (l.kind == LayoutKind::IntEqCompact) r = store_.land(r, validity(l, false));
  return r;
}

NodeRef BddDomain::assign(NodeRef s, VarId v, const Expr* e, const ForeignLookup& foreign) {
  if (!tracks(v) || s == kFalse) return s;
  if (e == nullptr || e->kind == Expr::Kind::Nondet) return havoc(s, v);
  const BitLayout& l = *layouts_[v];
  Encoder enc(*this, s, foreign);
  NodeRef rel = kTrue;
  std::vector<NodeRef> bitwise;  // Full: one conjunct per bit
  auto primed_code_is = [&](std::size_t code) {
    NodeRef r = kTrue;
    for (std::size_t i = 0; i < l.primed.size(); ++i)
      r = store_.land(r, (code >> i) & 1 ? store_.var(l.primed[i]) : store_.nvar(l.primed[i]));
    return r;
  };

  switch (l.kind) {
    case LayoutKind::Bool1:
      rel = store_.iff(store_.var(l.primed[0]), enc.pred(*e));
      break;
    case LayoutKind::Full: {
      bv::Vec val = enc.num(*e);
      for (std::size_t i = 0; i < l.primed.size(); ++i)
        bitwise.push_back(store_.iff(store_.var(l.primed[i]), val.bits[i]));
      break;
    }
    case LayoutKind::IntEqCompact: {
      const BitLayout* src = e->kind == Expr::Kind::Var && tracks(e->var) ? &*layouts_[e->var] : nullptr;
      std::optional<std::int64_t> c = enc.as_constant(*e);
      if (src && src->kind == LayoutKind::IntEqCompact && src->values == l.values) {
        NodeRef inside = store_.nvar(src->extra);
        for (std::size_t i = 0; i < l.primed.size(); ++i)
          inside = store_.land(inside, store_.iff(store_.var(l.primed[i]), store_.var(src->bits[i])));
        inside = store_.land(inside, store_.nvar(l.extra_primed));
        NodeRef outside = store_.land(store_.var(src->extra), store_.var(l.extra_primed));
        rel = store_.lor(inside, outside);
      } else if (c && std::find(l.values.begin(), l.values.end(), *c) != l.values.end()) {
        auto code = static_cast<std::size_t>(std::find(l.values.begin(), l.values.end(), *c) - l.values.begin());
        rel = store_.land(store_.nvar(l.extra_primed), primed_code_is(code));
      } else {
        bv::Vec val = enc.num(*e);
        NodeRef member = kFalse;
        rel = kFalse;
        for (std::size_t i = 0; i < l.values.size(); ++i) {
          NodeRef hit = bv::compare(store_, bv::Cmp::Eq, val, enc.constant(l.values[i]));
          member = store_.lor(member, hit);
          rel = store_.lor(rel, store_.land(hit, primed_code_is(i)));
        }
        rel = store_.land(rel, store_.nvar(l.extra_primed));
        rel = store_.lor(rel, store_.land(store_.negate(member), store_.var(l.extra_primed)));
      }
      break;
    }
  }

  std::vector<std::uint32_t> plain = l.bits;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> back;
  for (std::size_t i = 0; i < l.bits.size(); ++i) back.emplace_back(l.primed[i], l.bits[i]);
  if (l.kind == LayoutKind::IntEqCompact) {
    plain.push_back(l.extra);
    back.emplace_back(l.extra_primed, l.extra);
  }
  std::vector<NodeRef> conjuncts{enc.side, rel};
  conjuncts.insert(conjuncts.end(), bitwise.begin(), bitwise.end());
  NodeRef r = finish(s, conjuncts, plain);
  r = store_.rename(r, back);
  if (l.kind == LayoutKind::IntEqCompact) r = store_.land(r, validity(l, false));
  return r;
}

NodeRef BddDomain::assume(NodeRef s, const Expr& e, bool polarity, const ForeignLookup& foreign) {
  if (s == kFalse) return s;
  Encoder enc(*this, s, foreign);
  NodeRef p = enc.pred(e);
  if (!polarity) p = store_.negate(p);
  return finish(s, {enc.side, p}, {});
}

std::optional<std::int64_t> BddDomain::decode(VarId v, const std::vector<bool>& a) const {
  const BitLayout& l = *layouts_[v];
  switch (l.kind) {
    case LayoutKind::Bool1: return a[l.bits[0]] ? 1 : 0;
    case LayoutKind::IntEqCompact: {
      if (a[l.extra]) return std::nullopt;
      std::size_t code = 0;
      for (std::size_t i = 0; i < l.bits.size(); ++i)
        if (a[l.bits[i]]) code |= std::size_t{1} << i;
      if (code >= l.values.size()) return std::nullopt;
      return l.values[code];
    }
    case LayoutKind::Full: {
      bv::Vec c;
      for (auto b : l.bits) c.bits.push_back(a[b] ? kTrue : kFalse);
      return const_value(c);
    }
  }
  return std::nullopt;
}

std::vector<std::string> BddDomain::bit_names() const {
  std::vector<std::string> names(store_.num_bits());
  for (std::uint32_t b = 0; b < names.size(); ++b) names[b] = "t" + std::to_string(b);
  for (const auto& l : layouts_) {
    if (!l) continue;
    const std::string& n = cfa_.variables[l->var].name;
    for (std::size_t i = 0; i < l->bits.size(); ++i) {
      names[l->bits[i]] = n + "[" + std::to_string(i) + "]";
      names[l->primed[i]] = n + "'[" + std::to_string(i) + "]";
    }
    if (l->kind == LayoutKind::IntEqCompact) {
      names[l->extra] = n + ".extra";
      names[l->extra_primed] = n + "'.extra";
    }
  }
  return names;
}

void BddDomain::write_dot(std::ostream& os, NodeRef s, const std::string& name) const {
  store_.write_dot(os, s, name, bit_names());
}

}  // namespace domcheck
