#include "domcheck/domtype.hpp"

#include <algorithm>
#include <numeric>

namespace domcheck {

const char* to_string(DomainType t) {
  switch (t) {
    case DomainType::Bool: return "Bool";
    case DomainType::IntEq: return "IntEq";
    case DomainType::IntEqAdd: return "IntEqAdd";
    case DomainType::Int: return "Int";
  }
  return "?";
}

std::optional<DomainType> parse_domain_type(const std::string& s) {
  for (auto t : {DomainType::Bool, DomainType::IntEq, DomainType::IntEqAdd, DomainType::Int})
    if (s == to_string(t)) return t;
  return std::nullopt;
}

namespace {

bool is_simple(const Expr& e) { return e.kind == Expr::Kind::Var || e.kind == Expr::Kind::Const; }

/// Strongest operator requirement inside an arithmetic atom.
DomainType ops_level(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Unary: return join(DomainType::IntEqAdd, ops_level(*e.lhs));
    case Expr::Kind::Binary: {
      DomainType own = DomainType::IntEqAdd;
      switch (e.bop) {
        case BinOp::Mul: case BinOp::Div: case BinOp::Mod:
        case BinOp::Shl: case BinOp::Shr:
          own = DomainType::Int;
          break;
        default: break;
      }
      return join(own, join(ops_level(*e.lhs), ops_level(*e.rhs)));
    }
    default: return DomainType::Bool;
  }
}

class Collector {
 public:
  explicit Collector(EdgeConstraints& out) : out_(out) {}

  void need(VarId v, DomainType t) { out_.minimum.emplace_back(v, t); }
  void observe(VarId v, std::int32_t c) { out_.constants.emplace_back(v, c); }

  void taint(const Expr& e, DomainType t) {
    std::vector<VarId> vars;
    collect_vars(e, vars);
    for (VarId v : vars) need(v, t);
  }

  void atom(const Expr& e) { taint(e, join(DomainType::IntEqAdd, ops_level(e))); }

  void condition(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Var:
        need(e.var, DomainType::Bool);
        observe(e.var, 0);
        break;
      case Expr::Kind::Unary:
        if (e.uop == UnOp::Not) condition(*e.lhs);
        else atom(e);
        break;
      case Expr::Kind::Binary:
        if (is_logical(e.bop)) {
          condition(*e.lhs);
          condition(*e.rhs);
        } else if (e.bop == BinOp::Eq || e.bop == BinOp::Ne) {
          equality(e);
        } else {
          atom(e);
        }
        break;
      default: break;
    }
  }

  void equality(const Expr& e) {
    const Expr& l = *e.lhs;
    const Expr& r = *e.rhs;
    if (is_simple(l) && is_simple(r)) {
      if (l.kind == Expr::Kind::Var && r.kind == Expr::Kind::Var) {
        out_.partners.emplace_back(l.var, r.var);
        need(l.var, DomainType::Bool);
        need(r.var, DomainType::Bool);
      } else if (l.kind == Expr::Kind::Var) {
        compare_constant(l.var, r.value);
      } else if (r.kind == Expr::Kind::Var) {
        compare_constant(r.var, l.value);
      }
      return;
    }
    bool lb = l.is_boolean_valued();
    bool rb = r.is_boolean_valued();
    if ((lb || is_simple(l)) && (rb || is_simple(r))) {
      // one side yields 0/1, the other is a variable, constant or truth value
      for (const Expr* side : {&l, &r}) {
        if (side->is_boolean_valued()) {
          condition(*side);
        } else if (side->kind == Expr::Kind::Var) {
          need(side->var, DomainType::Bool);
          observe(side->var, 0);
          observe(side->var, 1);
        }
      }
      return;
    }
    atom(e);
  }

  void compare_constant(VarId v, std::int32_t c) {
    need(v, c == 0 ? DomainType::Bool : DomainType::IntEq);
    observe(v, c);
  }

  void assign(VarId v, const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Const:
        need(v, e.value == 0 || e.value == 1 ? DomainType::Bool : DomainType::IntEq);
        observe(v, e.value);
        return;
      case Expr::Kind::Var:
        out_.partners.emplace_back(v, e.var);
        need(v, DomainType::Bool);
        need(e.var, DomainType::Bool);
        return;
      case Expr::Kind::Nondet:
        need(v, DomainType::Bool);
        return;
      default: break;
    }
    if (e.is_boolean_valued()) {
      need(v, DomainType::Bool);
      observe(v, 0);
      observe(v, 1);
      condition(e);
      return;
    }
    DomainType t = join(DomainType::IntEqAdd, ops_level(e));
    need(v, t);
    taint(e, t);
  }

 private:
  EdgeConstraints& out_;
};

struct UnionFind {
  std::vector<std::int32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;  // smallest id represents the class
  }
};

}  // namespace

EdgeConstraints expression_constraints(const CfaEdge& edge) {
  EdgeConstraints out;
  Collector c(out);
  switch (edge.kind) {
    case CfaEdge::Kind::Decl:
      if (edge.expr) c.assign(edge.var, *edge.expr);
      else c.need(edge.var, DomainType::Bool);
      break;
    case CfaEdge::Kind::Assign: c.assign(edge.var, *edge.expr); break;
    case CfaEdge::Kind::Assume: c.condition(*edge.expr); break;
    case CfaEdge::Kind::Skip: break;
  }
  return out;
}

DomainTyping infer(const Cfa& cfa) {
  const std::size_t n = cfa.num_vars();
  std::vector<DomainType> own(n, DomainType::Bool);
  std::vector<int> own_witness(n, 0);
  std::vector<std::vector<std::int32_t>> constants(n);
  UnionFind uf(n);

  for (const auto& edge : cfa.edges) {
    EdgeConstraints ec = expression_constraints(edge);
    for (auto [v, t] : ec.minimum) {
      if (t > own[v]) {
        own[v] = t;
        own_witness[v] = edge.line;
      }
    }
    for (auto [a, b] : ec.partners) uf.unite(a, b);
    for (auto [v, c] : ec.constants) constants[v].push_back(c);
  }

  // A class takes the strongest requirement of any member.
  std::vector<DomainType> cls(n, DomainType::Bool);
  std::vector<int> cls_witness(n, 0);
  std::vector<std::vector<std::int32_t>> cls_values(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto r = uf.find(static_cast<std::int32_t>(v));
    if (own[v] > cls[r] || (own[v] == cls[r] && cls_witness[r] == 0)) {
      cls[r] = own[v];
      cls_witness[r] = own_witness[v];
    }
    cls_values[r].insert(cls_values[r].end(), constants[v].begin(), constants[v].end());
  }

  DomainTyping typing;
  typing.type_of.resize(n);
  typing.value_set.resize(n);
  typing.witness_line.resize(n);
  typing.partition.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto r = uf.find(static_cast<std::int32_t>(v));
    typing.partition[v] = r;
    typing.type_of[v] = cls[r];
    typing.witness_line[v] = own[v] == cls[r] && own_witness[v] != 0 ? own_witness[v]
                                                                    : cls_witness[r];
    if (cls[r] == DomainType::IntEq) {
      auto vs = cls_values[r];
      std::sort(vs.begin(), vs.end());
      vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
      typing.value_set[v] = std::move(vs);
    }
  }
  return typing;
}

std::array<std::size_t, 4> histogram(const DomainTyping& typing) {
  std::array<std::size_t, 4> h{};
  for (DomainType t : typing.type_of) ++h[static_cast<std::size_t>(t)];
  return h;
}

}  // namespace domcheck
