#include "doctest.h"

#include "domcheck/explicit_domain.hpp"
#include "domcheck/oracle.hpp"

#include <climits>
#include <random>

using namespace domcheck;

namespace {

// Variables x, y, z are VarIds 0, 1, 2.
ExprPtr C(std::int32_t v) { return Expr::constant(v); }
ExprPtr V(VarId v) { return Expr::variable(std::string(1, "xyz"[v]), v); }
ExprPtr B(BinOp op, ExprPtr l, ExprPtr r) { return Expr::binary(op, std::move(l), std::move(r)); }

ExplicitState state(std::initializer_list<std::pair<VarId, std::int32_t>> b) {
  ExplicitState s;
  for (auto [v, c] : b) s.set(v, c);
  return s;
}

const Precision kAll(3, true);

CfaEdge edge(CfaEdge::Kind k, VarId v, ExprPtr e, bool pol = true) {
  CfaEdge ed;
  ed.kind = k;
  ed.var = v;
  ed.expr = std::move(e);
  ed.polarity = pol;
  return ed;
}

// Reference evaluator on int64, wrapped to 32 bits at every step.
std::int64_t wrap(std::int64_t x) { return static_cast<std::int32_t>(static_cast<std::uint32_t>(x)); }

std::optional<std::int64_t> ref_eval(const Expr& e, const std::vector<std::int64_t>& val) {
  switch (e.kind) {
    case Expr::Kind::Const: return e.value;
    case Expr::Kind::Var: return val[e.var];
    case Expr::Kind::Nondet: return std::nullopt;
    case Expr::Kind::Unary: {
      auto a = ref_eval(*e.lhs, val);
      if (!a) return std::nullopt;
      return e.uop == UnOp::Not ? std::int64_t{*a == 0} : wrap(~*a);
    }
    case Expr::Kind::Binary: break;
  }
  auto a = ref_eval(*e.lhs, val);
  if (e.bop == BinOp::LogAnd && a && *a == 0) return 0;
  if (e.bop == BinOp::LogOr && a && *a != 0) return 1;
  auto b = ref_eval(*e.rhs, val);
  if (e.bop == BinOp::LogAnd && b && *b == 0) return 0;
  if (e.bop == BinOp::LogOr && b && *b != 0) return 1;
  if (!a || !b) return std::nullopt;
  std::int64_t x = *a, y = *b;
  switch (e.bop) {
    case BinOp::Add: return wrap(x + y);
    case BinOp::Sub: return wrap(x - y);
    case BinOp::Mul: return wrap(x * y);
    case BinOp::Div:
      if (y == 0) return std::nullopt;
      return wrap(x / y);
    case BinOp::Mod:
      if (y == 0) return std::nullopt;
      return wrap(x % y);
    case BinOp::Shl: {
      auto amount = static_cast<std::uint32_t>(y);
      return amount >= 32 ? 0 : wrap(static_cast<std::int64_t>(static_cast<std::uint64_t>(x) << amount));
    }
    case BinOp::Shr: {
      auto amount = static_cast<std::uint32_t>(y);
      return amount >= 32 ? (x < 0 ? -1 : 0) : x >> amount;
    }
    case BinOp::BitAnd: return x & y;
    case BinOp::BitOr: return x | y;
    case BinOp::BitXor: return x ^ y;
    case BinOp::LogAnd: return std::int64_t{x != 0 && y != 0};
    case BinOp::LogOr: return std::int64_t{x != 0 || y != 0};
    case BinOp::Eq: return std::int64_t{x == y};
    case BinOp::Ne: return std::int64_t{x != y};
    case BinOp::Lt: return std::int64_t{x < y};
    case BinOp::Gt: return std::int64_t{x > y};
    case BinOp::Le: return std::int64_t{x <= y};
    case BinOp::Ge: return std::int64_t{x >= y};
  }
  return std::nullopt;
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  std::int32_t value() {
    static const std::int32_t interesting[] = {0, 1, -1, 2, 3, 5, 31, 32, INT_MAX, INT_MIN, 1000};
    if (pick(3) == 0) return interesting[pick(11)];
    return std::uniform_int_distribution<std::int32_t>(-20, 20)(rng);
  }

  ExprPtr expr(int depth) {
    if (depth == 0 || pick(4) == 0) return pick(2) ? V(pick(3)) : C(value());
    static const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod, BinOp::Shl,
                                BinOp::Shr, BinOp::BitAnd, BinOp::BitOr, BinOp::BitXor, BinOp::LogAnd,
                                BinOp::LogOr, BinOp::Eq, BinOp::Ne, BinOp::Lt, BinOp::Gt, BinOp::Le, BinOp::Ge};
    if (pick(8) == 0) return Expr::unary(pick(2) ? UnOp::Not : UnOp::BitNot, expr(depth - 1));
    return B(ops[pick(18)], expr(depth - 1), expr(depth - 1));
  }

  ExplicitState partial(int max_value_pool = 0) {
    ExplicitState s;
    for (VarId v = 0; v < 3; ++v) {
      if (pick(3) == 0) continue;
      s.set(v, max_value_pool > 0 ? pick(max_value_pool) : value());
    }
    return s;
  }
};

bool compatible(const ExplicitState& s, const std::vector<std::int64_t>& c) {
  for (auto [v, value] : s.bindings())
    if (c[v] != value) return false;
  return true;
}

}  // namespace

TEST_CASE("explicit eval: documented examples") {
  // x * x > 200 with x = 20
  CHECK(eval(state({{0, 20}}), *B(BinOp::Gt, B(BinOp::Mul, V(0), V(0)), C(200))) == 1);
  CHECK_FALSE(eval(ExplicitState::top(), *B(BinOp::Add, V(1), C(1))).has_value());
  CHECK(eval(state({{0, INT_MAX}}), *B(BinOp::Add, V(0), C(1))) == INT_MIN);
}

TEST_CASE("explicit eval: short circuit, nondet, division by zero") {
  auto top = ExplicitState::top();
  CHECK(eval(top, *B(BinOp::LogAnd, C(0), V(1))) == 0);
  CHECK(eval(top, *B(BinOp::LogOr, C(1), V(1))) == 1);
  CHECK_FALSE(eval(top, *B(BinOp::LogAnd, C(1), V(1))).has_value());
  CHECK_FALSE(eval(top, *B(BinOp::Add, Expr::nondet(), C(0))).has_value());
  CHECK_FALSE(eval(state({{0, 4}}), *B(BinOp::Div, V(0), C(0))).has_value());
  CHECK_FALSE(eval(state({{0, 4}}), *B(BinOp::Mod, V(0), C(0))).has_value());
  CHECK(eval(top, *B(BinOp::Div, C(INT_MIN), C(-1))) == INT_MIN);
  CHECK(eval(top, *B(BinOp::Mod, C(INT_MIN), C(-1))) == 0);
  CHECK(eval(top, *B(BinOp::Div, C(-7), C(2))) == -3);
  CHECK(eval(top, *B(BinOp::Mod, C(-7), C(2))) == -1);
}

TEST_CASE("explicit eval agrees with a reference evaluator") {
  Gen g(11);
  int unknown = 0;
  for (int i = 0; i < 20000; ++i) {
    ExprPtr e = g.expr(3);
    std::vector<std::int64_t> val{g.value(), g.value(), g.value()};
    ExplicitState s = state({{0, static_cast<std::int32_t>(val[0])},
                             {1, static_cast<std::int32_t>(val[1])},
                             {2, static_cast<std::int32_t>(val[2])}});
    auto got = eval(s, *e);
    auto want = ref_eval(*e, val);
    if (!want) ++unknown;
    REQUIRE_MESSAGE(got.has_value() == want.has_value(), to_string(*e));
    if (got) REQUIRE_MESSAGE(*got == *want, to_string(*e));
  }
  CHECK(unknown < 20000 / 4);
}

TEST_CASE("explicit transfer: documented examples") {
  auto s = transfer(ExplicitState::top(), edge(CfaEdge::Kind::Assign, 1, C(20)), kAll);
  CHECK(s == state({{1, 20}}));

  // enabled || a > 5 with enabled, a untracked leaves {b:20} alone
  Precision only_b{false, true, false};
  auto cond = B(BinOp::LogOr, V(0), B(BinOp::Gt, V(2), C(5)));
  CHECK(transfer(state({{1, 20}}), edge(CfaEdge::Kind::Assume, kNoVar, cond), only_b) == state({{1, 20}}));

  CHECK(transfer(state({{0, 1}}), edge(CfaEdge::Kind::Assume, kNoVar, B(BinOp::Eq, V(0), C(0))), kAll)
            .is_bottom());
}

TEST_CASE("explicit transfer: assign, decl and precision") {
  auto s = state({{0, 3}, {1, 4}});
  CHECK(transfer(s, edge(CfaEdge::Kind::Assign, 2, B(BinOp::Add, V(0), V(1))), kAll) ==
        state({{0, 3}, {1, 4}, {2, 7}}));
  CHECK(transfer(s, edge(CfaEdge::Kind::Assign, 0, Expr::nondet()), kAll) == state({{1, 4}}));
  CHECK(transfer(s, edge(CfaEdge::Kind::Decl, 1, nullptr), kAll) == state({{0, 3}}));
  CHECK(transfer(s, edge(CfaEdge::Kind::Decl, 2, C(9)), kAll) == state({{0, 3}, {1, 4}, {2, 9}}));
  Precision no_z{true, true, false};
  CHECK(transfer(s, edge(CfaEdge::Kind::Assign, 2, C(9)), no_z) == s);
  CHECK(transfer(s, edge(CfaEdge::Kind::Skip, kNoVar, nullptr), kAll) == s);
}

TEST_CASE("explicit assume refinement binds equalities") {
  auto top = ExplicitState::top();
  CHECK(assume(top, *B(BinOp::Eq, V(0), C(7)), true, kAll) == state({{0, 7}}));
  CHECK(assume(top, *B(BinOp::Ne, V(0), C(7)), false, kAll) == state({{0, 7}}));
  CHECK(assume(top, *B(BinOp::Ne, V(0), C(7)), true, kAll) == top);
  CHECK(assume(top, *Expr::unary(UnOp::Not, V(0)), true, kAll) == state({{0, 0}}));
  CHECK(assume(top, *V(0), false, kAll) == state({{0, 0}}));
  CHECK(assume(top, *B(BinOp::Lt, V(0), C(7)), true, kAll) == top);
  CHECK(assume(state({{1, 2}}), *B(BinOp::Eq, V(0), V(1)), true, kAll) == state({{0, 2}, {1, 2}}));
  auto both = B(BinOp::LogAnd, B(BinOp::Eq, V(0), C(1)), B(BinOp::Eq, V(1), C(2)));
  CHECK(assume(top, *both, true, kAll) == state({{0, 1}, {1, 2}}));
  Precision no_x{false, true, true};
  CHECK(assume(top, *B(BinOp::Eq, V(0), C(7)), true, no_x) == top);
}

TEST_CASE("explicit subsumption: documented examples") {
  CHECK(subsumes(state({{0, 5}, {1, 3}}), state({{0, 5}})));
  CHECK_FALSE(subsumes(state({{0, 5}}), state({{0, 6}})));
  CHECK_FALSE(subsumes(state({{0, 5}}), state({{0, 5}, {1, 3}})));
  CHECK(subsumes(ExplicitState::bottom(), state({{0, 1}})));
}

TEST_CASE("explicit subsumption is a partial order") {
  Gen g(5);
  std::size_t transitive_chains = 0;
  for (int i = 0; i < 4000; ++i) {
    // random triples, and chains c <= b <= a built by adding bindings
    ExplicitState a = g.partial(2), b = g.partial(2), c = g.partial(2);
    if (g.pick(2) == 0) {
      b = c;
      a = c;
      for (VarId v = 0; v < 3; ++v) {
        if (c.get(v)) continue;
        if (g.pick(2)) b.set(v, g.pick(2));
        if (b.get(v)) a.set(v, *b.get(v));
        else if (g.pick(2)) a.set(v, g.pick(2));
      }
    }
    REQUIRE(subsumes(a, a));
    if (subsumes(a, b) && subsumes(b, a)) REQUIRE(a == b);
    if (subsumes(a, b) && subsumes(b, c)) {
      ++transitive_chains;
      REQUIRE(subsumes(a, c));
    }
    // fewer facts means weaker: dropping a binding yields a covering state
    if (a.size() > 0) {
      ExplicitState weaker = a;
      weaker.erase(a.bindings().front().first);
      REQUIRE(subsumes(a, weaker));
    }
  }
  CHECK(transitive_chains > 1000);
}

TEST_CASE("explicit transfer is sound against concrete steps") {
  Gen g(23);
  OracleOptions opt;
  std::size_t checked = 0;
  for (int i = 0; i < 3000; ++i) {
    ExplicitState s = g.partial();
    CfaEdge e = g.pick(2) ? edge(CfaEdge::Kind::Assign, g.pick(3), g.expr(2))
                          : edge(CfaEdge::Kind::Assume, kNoVar, g.expr(2), g.pick(2) == 0);
    Precision prec{g.pick(4) != 0, g.pick(4) != 0, g.pick(4) != 0};
    // keep the precision projection invariant on the input
    ExplicitState in;
    for (auto [v, c] : s.bindings())
      if (prec[v]) in.set(v, c);
    ExplicitState out = transfer(in, e, prec);
    for (auto [v, c] : out.bindings()) REQUIRE(prec[v]);
    if (e.kind == CfaEdge::Kind::Assign) {
      std::size_t changed = 0;
      for (VarId v = 0; v < 3; ++v) changed += in.get(v) != out.get(v);
      REQUIRE(changed <= 1);
    }
    for (int k = 0; k < 8; ++k) {
      std::vector<std::int64_t> conc(3);
      for (VarId v = 0; v < 3; ++v) conc[v] = in.get(v) ? *in.get(v) : g.value();
      for (const auto& next : oracle_step(e, conc, opt)) {
        ++checked;
        REQUIRE_FALSE(out.is_bottom());
        REQUIRE(compatible(out, next));
      }
    }
  }
  CHECK(checked > 5000);
}

TEST_CASE("explicit state rendering and hashing") {
  auto s = state({{2, -1}, {0, 5}});
  CHECK(s.to_string({"x", "y", "z"}) == "{x=5, z=-1}");
  CHECK(ExplicitState::top().to_string({"x"}) == "{}");
  CHECK(s.hash() == state({{0, 5}, {2, -1}}).hash());
  CHECK(s == state({{0, 5}, {2, -1}}));
}
