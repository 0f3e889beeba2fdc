#include "domcheck/explicit_domain.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace domcheck {

namespace arith {

namespace {
std::int32_t wrap(std::uint32_t u) { return static_cast<std::int32_t>(u); }
}  // namespace

std::int32_t add(std::int32_t a, std::int32_t b) {
  return wrap(static_cast<std::uint32_t>(a) + static_cast<std::uint32_t>(b));
}
std::int32_t sub(std::int32_t a, std::int32_t b) {
  return wrap(static_cast<std::uint32_t>(a) - static_cast<std::uint32_t>(b));
}
std::int32_t mul(std::int32_t a, std::int32_t b) {
  return wrap(static_cast<std::uint32_t>(a) * static_cast<std::uint32_t>(b));
}
std::int32_t div(std::int32_t a, std::int32_t b) {
  if (a == std::numeric_limits<std::int32_t>::min() && b == -1) return a;
  return a / b;
}
std::int32_t mod(std::int32_t a, std::int32_t b) {
  if (b == -1) return 0;
  return a % b;
}
std::int32_t shl(std::int32_t a, std::int32_t amount) {
  auto k = static_cast<std::uint32_t>(amount);
  if (k >= 32) return 0;
  return wrap(static_cast<std::uint32_t>(a) << k);
}
std::int32_t shr(std::int32_t a, std::int32_t amount) {
  auto k = static_cast<std::uint32_t>(amount);
  if (k >= 32) return a < 0 ? -1 : 0;
  return a >> k;
}

}  // namespace arith

std::optional<std::int32_t> ExplicitState::get(VarId v) const {
  auto it = std::lower_bound(map_.begin(), map_.end(), v,
                             [](const auto& p, VarId x) { return p.first < x; });
  if (it != map_.end() && it->first == v) return it->second;
  return std::nullopt;
}

void ExplicitState::set(VarId v, std::int32_t value) {
  auto it = std::lower_bound(map_.begin(), map_.end(), v,
                             [](const auto& p, VarId x) { return p.first < x; });
  if (it != map_.end() && it->first == v) it->second = value;
  else map_.insert(it, {v, value});
}

void ExplicitState::erase(VarId v) {
  auto it = std::lower_bound(map_.begin(), map_.end(), v,
                             [](const auto& p, VarId x) { return p.first < x; });
  if (it != map_.end() && it->first == v) map_.erase(it);
}

std::size_t ExplicitState::hash() const {
  std::size_t h = bottom_ ? 0x9e3779b9u : 0;
  for (auto [v, c] : map_) {
    std::uint64_t k = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) << 32) |
                      static_cast<std::uint32_t>(c);
    h ^= std::hash<std::uint64_t>{}(k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string ExplicitState::to_string(const std::vector<std::string>& names) const {
  if (bottom_) return "bottom";
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < map_.size(); ++i) {
    if (i) os << ", ";
    auto v = static_cast<std::size_t>(map_[i].first);
    os << (v < names.size() ? names[v] : "v" + std::to_string(v)) << '=' << map_[i].second;
  }
  os << '}';
  return os.str();
}

std::optional<std::int32_t> eval(const ExplicitState& s, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const: return e.value;
    case Expr::Kind::Var: return s.get(e.var);
    case Expr::Kind::Nondet: return std::nullopt;
    case Expr::Kind::Unary: {
      auto x = eval(s, *e.lhs);
      if (!x) return std::nullopt;
      return e.uop == UnOp::Not ? std::int32_t{*x == 0} : ~*x;
    }
    case Expr::Kind::Binary: break;
  }
  auto l = eval(s, *e.lhs);
  if (e.bop == BinOp::LogAnd || e.bop == BinOp::LogOr) {
    const std::int32_t absorbing = e.bop == BinOp::LogAnd ? 0 : 1;
    if (l && (*l != 0) == static_cast<bool>(absorbing)) return absorbing;
    auto r = eval(s, *e.rhs);
    if (r && (*r != 0) == static_cast<bool>(absorbing)) return absorbing;
    if (!l || !r) return std::nullopt;
    return 1 - absorbing;
  }
  if (!l) return std::nullopt;
  auto r = eval(s, *e.rhs);
  if (!r) return std::nullopt;
  const std::int32_t a = *l, b = *r;
  switch (e.bop) {
    case BinOp::Add: return arith::add(a, b);
    case BinOp::Sub: return arith::sub(a, b);
    case BinOp::Mul: return arith::mul(a, b);
    case BinOp::Div:
      if (b == 0) return std::nullopt;
      return arith::div(a, b);
    case BinOp::Mod:
      if (b == 0) return std::nullopt;
      return arith::mod(a, b);
    case BinOp::Shl: return arith::shl(a, b);
    case BinOp::Shr: return arith::shr(a, b);
    case BinOp::BitAnd: return a & b;
    case BinOp::BitOr: return a | b;
    case BinOp::BitXor: return a ^ b;
    case BinOp::Eq: return a == b;
    case BinOp::Ne: return a != b;
    case BinOp::Lt: return a < b;
    case BinOp::Gt: return a > b;
    case BinOp::Le: return a <= b;
    case BinOp::Ge: return a >= b;
    default: return std::nullopt;
  }
}

ExplicitState assign(const ExplicitState& s, VarId v, const Expr* e, const Precision& prec) {
  if (s.is_bottom() || !prec[v]) return s;
  ExplicitState out = s;
  std::optional<std::int32_t> value = e ? eval(s, *e) : std::nullopt;
  if (value) out.set(v, *value);
  else out.erase(v);
  return out;
}

namespace {

/// Learns bindings from an assume whose truth value is still unknown.
void refine(ExplicitState& s, const Expr& e, bool pol, const Precision& prec) {
  auto bind = [&](VarId v, std::int32_t c) {
    if (prec[v] && !s.get(v)) s.set(v, c);
  };
  switch (e.kind) {
    case Expr::Kind::Var:
      if (!pol) bind(e.var, 0);
      return;
    case Expr::Kind::Unary:
      if (e.uop == UnOp::Not) refine(s, *e.lhs, !pol, prec);
      return;
    case Expr::Kind::Binary: break;
    default: return;
  }
  if ((e.bop == BinOp::LogAnd && pol) || (e.bop == BinOp::LogOr && !pol)) {
    refine(s, *e.lhs, pol, prec);
    refine(s, *e.rhs, pol, prec);
    return;
  }
  const bool is_eq = (e.bop == BinOp::Eq && pol) || (e.bop == BinOp::Ne && !pol);
  if (!is_eq) return;
  const Expr& l = *e.lhs;
  const Expr& r = *e.rhs;
  if (l.kind == Expr::Kind::Var && r.kind == Expr::Kind::Const) bind(l.var, r.value);
  else if (r.kind == Expr::Kind::Var && l.kind == Expr::Kind::Const) bind(r.var, l.value);
  else if (l.kind == Expr::Kind::Var && r.kind == Expr::Kind::Var) {
    if (auto c = s.get(r.var)) bind(l.var, *c);
    else if (auto d = s.get(l.var)) bind(r.var, *d);
  }
}

}  // namespace

ExplicitState assume(const ExplicitState& s, const Expr& e, bool polarity, const Precision& prec) {
  if (s.is_bottom()) return s;
  auto value = eval(s, e);
  if (value) return (*value != 0) == polarity ? s : ExplicitState::bottom();
  ExplicitState out = s;
  refine(out, e, polarity, prec);
  // a learned binding may expose a contradiction in another conjunct
  if (out.size() != s.size()) {
    if (auto again = eval(out, e); again && (*again != 0) != polarity) return ExplicitState::bottom();
  }
  return out;
}

ExplicitState transfer(const ExplicitState& s, const CfaEdge& edge, const Precision& prec) {
  switch (edge.kind) {
    case CfaEdge::Kind::Decl:
    case CfaEdge::Kind::Assign: return assign(s, edge.var, edge.expr.get(), prec);
    case CfaEdge::Kind::Assume: return assume(s, *edge.expr, edge.polarity, prec);
    case CfaEdge::Kind::Skip: return s;
  }
  return s;
}

bool subsumes(const ExplicitState& s1, const ExplicitState& s2) {
  if (s1.is_bottom()) return true;
  if (s2.is_bottom()) return false;
  if (s2.size() > s1.size()) return false;
  const auto& a = s1.bindings();
  const auto& b = s2.bindings();
  std::size_t i = 0;
  for (const auto& p : b) {
    while (i < a.size() && a[i].first < p.first) ++i;
    if (i == a.size() || a[i] != p) return false;
  }
  return true;
}

}  // namespace domcheck
