#include "domcheck/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace domcheck {

const char* to_string(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::Safe: return "SAFE";
    case OracleVerdict::Unsafe: return "UNSAFE";
    case OracleVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

std::int64_t wrap_to_width(std::int64_t x, unsigned width) {
  if (width >= 64) return x;
  const std::uint64_t m = std::uint64_t{1} << width;
  std::uint64_t u = static_cast<std::uint64_t>(x) & (m - 1);
  if (u >= m / 2) return static_cast<std::int64_t>(u) - static_cast<std::int64_t>(m);
  return static_cast<std::int64_t>(u);
}

namespace {

using Valuation = std::vector<std::int64_t>;

/// All values `e` can take; nondet sites fan out over the option values.
class Evaluator {
 public:
  explicit Evaluator(const OracleOptions& opt) : opt_(opt) {}

  std::vector<std::int64_t> values(const Expr& e, const Valuation& val) const {
    std::vector<std::int64_t> out;
    collect(e, val, [&](std::int64_t x) { out.push_back(x); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  std::int64_t w(std::int64_t x) const { return wrap_to_width(x, opt_.width); }

  void collect(const Expr& e, const Valuation& val, const std::function<void(std::int64_t)>& k) const {
    switch (e.kind) {
      case Expr::Kind::Const: k(w(e.value)); return;
      case Expr::Kind::Var: k(val[e.var] == kUndefined ? 0 : val[e.var]); return;
      case Expr::Kind::Nondet:
        for (auto c : opt_.nondet_values) k(w(c));
        return;
      case Expr::Kind::Unary:
        collect(*e.lhs, val, [&](std::int64_t x) {
          k(e.uop == UnOp::Not ? (x == 0 ? 1 : 0) : w(~x));
        });
        return;
      case Expr::Kind::Binary: break;
    }
    collect(*e.lhs, val, [&](std::int64_t a) {
      if (e.bop == BinOp::LogAnd && a == 0) return k(0);
      if (e.bop == BinOp::LogOr && a != 0) return k(1);
      collect(*e.rhs, val, [&](std::int64_t b) { binary(e.bop, a, b, k); });
    });
  }

  void binary(BinOp op, std::int64_t a, std::int64_t b, const std::function<void(std::int64_t)>& k) const {
    const unsigned width = opt_.width;
    const std::uint64_t umask = width >= 64 ? ~0ULL : (std::uint64_t{1} << width) - 1;
    switch (op) {
      case BinOp::Add: return k(w(a + b));
      case BinOp::Sub: return k(w(a - b));
      case BinOp::Mul: return k(w(static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b))));
      case BinOp::Div:
      case BinOp::Mod:
        if (b == 0) {
          for (auto c : opt_.nondet_values) k(w(c));
          return;
        }
        return k(w(op == BinOp::Div ? a / b : a % b));
      case BinOp::Shl:
      case BinOp::Shr: {
        std::uint64_t amount = static_cast<std::uint64_t>(b) & umask;
        if (amount >= width) return k(op == BinOp::Shl ? 0 : (a < 0 ? -1 : 0));
        if (op == BinOp::Shl) return k(w(static_cast<std::int64_t>(static_cast<std::uint64_t>(a) << amount)));
        return k(a >> amount);
      }
      case BinOp::BitAnd: return k(a & b);
      case BinOp::BitOr: return k(a | b);
      case BinOp::BitXor: return k(a ^ b);
      case BinOp::LogAnd: return k(b != 0 ? 1 : 0);
      case BinOp::LogOr: return k(b != 0 ? 1 : 0);
      case BinOp::Eq: return k(a == b);
      case BinOp::Ne: return k(a != b);
      case BinOp::Lt: return k(a < b);
      case BinOp::Gt: return k(a > b);
      case BinOp::Le: return k(a <= b);
      case BinOp::Ge: return k(a >= b);
    }
  }

  const OracleOptions& opt_;
};

/// Successor valuations of one edge.
std::vector<Valuation> step(const Evaluator& ev, const OracleOptions& opt, const CfaEdge& edge,
                            const Valuation& val) {
  std::vector<Valuation> out;
  switch (edge.kind) {
    case CfaEdge::Kind::Skip: out.push_back(val); break;
    case CfaEdge::Kind::Assume:
      for (auto x : ev.values(*edge.expr, val)) {
        if ((x != 0) == edge.polarity) {
          out.push_back(val);
          break;
        }
      }
      break;
    case CfaEdge::Kind::Decl:
    case CfaEdge::Kind::Assign: {
      std::vector<std::int64_t> xs;
      if (edge.expr) {
        xs = ev.values(*edge.expr, val);
      } else {
        for (auto c : opt.nondet_values) xs.push_back(wrap_to_width(c, opt.width));
      }
      for (auto x : xs) {
        Valuation next = val;
        next[edge.var] = x;
        out.push_back(std::move(next));
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::int64_t>> oracle_step(const CfaEdge& edge,
                                                   const std::vector<std::int64_t>& valuation,
                                                   const OracleOptions& opt) {
  Evaluator ev(opt);
  return step(ev, opt, edge, valuation);
}

OracleResult oracle_interpret(const Cfa& cfa, const OracleOptions& opt) {
  Evaluator ev(opt);
  OracleResult result;
  bool hit_limit = false;
  std::size_t work = 0;
  std::vector<int> path;

  // returns true once an error location is reached
  std::function<bool(LocId, const Valuation&, std::size_t)> run =
      [&](LocId loc, const Valuation& val, std::size_t steps) -> bool {
    if (cfa.is_error[loc]) {
      result.error_trace = path;
      return true;
    }
    if (cfa.out[loc].empty()) {
      ++result.paths;
      return false;
    }
    if (steps >= opt.step_limit || work >= opt.work_limit) {
      hit_limit = true;
      return false;
    }
    for (int ei : cfa.out[loc]) {
      const CfaEdge& edge = cfa.edges[ei];
      ++work;
      for (const Valuation& next : step(ev, opt, edge, val)) {
        path.push_back(ei);
        bool found = run(edge.target, next, steps + 1);
        path.pop_back();
        if (found) return true;
      }
    }
    return false;
  };

  Valuation init(cfa.num_vars(), kUndefined);
  if (run(cfa.entry, init, 0)) result.verdict = OracleVerdict::Unsafe;
  else if (hit_limit) result.verdict = OracleVerdict::Inconclusive;
  else result.verdict = OracleVerdict::Safe;
  return result;
}

std::map<LocId, std::set<std::vector<std::int64_t>>> oracle_reachable(const Cfa& cfa,
                                                                      const OracleOptions& opt) {
  Evaluator ev(opt);
  std::map<LocId, std::set<Valuation>> seen;
  std::deque<std::pair<LocId, Valuation>> work;
  Valuation init(cfa.num_vars(), kUndefined);
  seen[cfa.entry].insert(init);
  work.emplace_back(cfa.entry, init);
  while (!work.empty()) {
    auto [loc, val] = work.front();
    work.pop_front();
    for (int ei : cfa.out[loc]) {
      const CfaEdge& edge = cfa.edges[ei];
      for (Valuation& next : step(ev, opt, edge, val)) {
        if (seen[edge.target].insert(next).second) work.emplace_back(edge.target, std::move(next));
      }
    }
  }
  return seen;
}

OracleVerdict oracle_search(const Cfa& cfa, const OracleOptions& opt) {
  Evaluator ev(opt);
  std::map<LocId, std::set<Valuation>> seen;
  std::deque<std::pair<LocId, Valuation>> work;
  Valuation init(cfa.num_vars(), kUndefined);
  seen[cfa.entry].insert(init);
  work.emplace_back(cfa.entry, init);
  std::size_t count = 1;
  while (!work.empty()) {
    auto [loc, val] = work.front();
    work.pop_front();
    if (cfa.is_error[loc]) return OracleVerdict::Unsafe;
    for (int ei : cfa.out[loc]) {
      const CfaEdge& edge = cfa.edges[ei];
      for (Valuation& next : step(ev, opt, edge, val)) {
        if (!seen[edge.target].insert(next).second) continue;
        if (++count > opt.work_limit) return OracleVerdict::Inconclusive;
        work.emplace_back(edge.target, std::move(next));
      }
    }
  }
  return OracleVerdict::Safe;
}

}  // namespace domcheck
