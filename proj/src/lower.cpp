#include "domcheck/lower.hpp"
#include "domcheck/errors.hpp"
#include "domcheck/parser.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace domcheck {

std::string to_string(const CfaEdge& edge, const std::vector<std::string>& names) {
  auto var = [&](VarId v) {
    return v >= 0 && static_cast<std::size_t>(v) < names.size() ? names[v] : std::string("?");
  };
  std::ostringstream os;
  switch (edge.kind) {
    case CfaEdge::Kind::Decl:
      os << "int " << var(edge.var);
      if (edge.expr) os << " = " << to_string(*edge.expr);
      break;
    case CfaEdge::Kind::Assign: os << var(edge.var) << " = " << to_string(*edge.expr); break;
    case CfaEdge::Kind::Assume:
      os << '[' << (edge.polarity ? "" : "!(") << to_string(*edge.expr)
         << (edge.polarity ? "" : ")") << ']';
      break;
    case CfaEdge::Kind::Skip: os << "skip"; break;
  }
  return os.str();
}

std::vector<LocId> Cfa::error_locations() const {
  std::vector<LocId> out;
  for (LocId l = 0; l < num_locations; ++l)
    if (is_error[l]) out.push_back(l);
  return out;
}

std::vector<std::string> Cfa::variable_names() const {
  std::vector<std::string> out;
  out.reserve(variables.size());
  for (const auto& v : variables) out.push_back(v.name);
  return out;
}

VarId Cfa::find_variable(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].name == name) return static_cast<VarId>(i);
  return kNoVar;
}

namespace {

using Err = FrontendError::Kind;

bool is_nondet_builtin(const std::string& n) {
  return n == "__VERIFIER_nondet_int" || n == "nondet" || n == "nondet_int";
}
bool is_error_builtin(const std::string& n) { return n == "__VERIFIER_error" || n == "error"; }
bool is_assert_builtin(const std::string& n) { return n == "assert" || n == "__VERIFIER_assert"; }
bool is_assume_builtin(const std::string& n) { return n == "assume" || n == "__VERIFIER_assume"; }

class Lowerer {
 public:
  explicit Lowerer(const Program& prog) : prog_(prog) {}

  Cfa run() {
    const Function* main_fn = prog_.find_function("main");
    if (main_fn == nullptr) throw FrontendError(Err::UndefinedFunction, 1, 1, "no main function");

    entry_ = new_loc();
    frames_.push_back(Frame{});
    frames_.back().scopes.emplace_back();  // globals
    LocId cur = entry_;
    for (const auto& g : prog_.globals) {
      LocId next = new_loc();
      lower_decl(*g, cur, next, /*global=*/true);
      cur = next;
    }
    globals_ = frames_.back().scopes.front();

    frames_.back().function = main_fn->name;
    frames_.back().scopes.emplace_back();
    LocId exit = new_loc();
    frames_.back().exit = exit;
    lower_stmt(*main_fn->body, cur, exit);
    finish_frame(*main_fn);
    return prune();
  }

 private:
  struct Loop {
    LocId break_to;
    LocId continue_to;
  };

  struct Frame {
    std::string function;
    std::string suffix;                 // "@f#k" for inlined callees
    std::vector<std::unordered_map<std::string, VarId>> scopes;
    std::map<std::string, LocId> labels;
    std::map<std::string, int> label_use_line;
    std::unordered_set<std::string> labels_defined;
    std::vector<Loop> loops;
    LocId exit = -1;
    VarId ret = kNoVar;
  };

  LocId new_loc() {
    is_error_.push_back(false);
    return static_cast<LocId>(is_error_.size() - 1);
  }

  LocId new_error_loc() {
    LocId l = new_loc();
    is_error_[l] = true;
    return l;
  }

  void add_edge(LocId from, LocId to, CfaEdge::Kind kind, VarId var, ExprPtr expr, bool pol,
                int line) {
    CfaEdge e;
    e.source = from;
    e.target = to;
    e.kind = kind;
    e.var = var;
    e.expr = std::move(expr);
    e.polarity = pol;
    e.line = line;
    edges_.push_back(std::move(e));
  }

  void skip(LocId from, LocId to, int line) {
    add_edge(from, to, CfaEdge::Kind::Skip, kNoVar, nullptr, true, line);
  }

  Frame& frame() { return frames_.back(); }

  bool user_defined(const std::string& name) const { return prog_.find_function(name) != nullptr; }

  // -- variables ------------------------------------------------------------

  VarId declare(const std::string& name, int line, int col, bool global) {
    auto& scope = frame().scopes.back();
    if (scope.count(name) > 0)
      throw FrontendError(Err::Syntax, line, col, "redeclaration of '" + name + "'");
    std::string base = name + frame().suffix;
    std::string unique = base;
    for (int n = 1; used_names_.count(unique) > 0; ++n) unique = base + "." + std::to_string(n);
    used_names_.insert(unique);
    VarId id = static_cast<VarId>(vars_.size());
    vars_.push_back(VarInfo{unique, line, global});
    scope[name] = id;
    return id;
  }

  VarId declare_hidden(const std::string& unique_name, int line) {
    used_names_.insert(unique_name);
    VarId id = static_cast<VarId>(vars_.size());
    vars_.push_back(VarInfo{unique_name, line, false});
    return id;
  }

  VarId resolve(const std::string& name, int line, int col = 0) {
    const auto& scopes = frame().scopes;
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    auto g = globals_.find(name);
    if (g != globals_.end()) return g->second;
    throw FrontendError(Err::UndeclaredVariable, line, col, "'" + name + "' is not declared");
  }

  ExprPtr resolve(const ExprPtr& e) {
    switch (e->kind) {
      case Expr::Kind::Var: {
        VarId id = resolve(e->name, e->line);
        return Expr::variable(vars_[id].name, id, e->line);
      }
      case Expr::Kind::Unary: return Expr::unary(e->uop, resolve(e->lhs), e->line);
      case Expr::Kind::Binary:
        return Expr::binary(e->bop, resolve(e->lhs), resolve(e->rhs), e->line);
      default: return e;
    }
  }

  // -- statements ---------------------------------------------------------------

  void lower_decl(const Stmt& s, LocId from, LocId to, bool global) {
    LocId cur = from;
    for (std::size_t i = 0; i < s.decls.size(); ++i) {
      const Declarator& d = s.decls[i];
      LocId next = i + 1 == s.decls.size() ? to : new_loc();
      if (!d.init) {
        VarId v = declare(d.name, d.line, d.col, global);
        add_edge(cur, next, CfaEdge::Kind::Decl, v, global ? Expr::constant(0, d.line) : nullptr,
                 true, d.line);
      } else if (d.init->call) {
        const Call& c = *d.init->call;
        if (global) throw FrontendError(Err::UnsupportedConstruct, d.line, d.col,
                                        "call in global initializer");
        if (!user_defined(c.callee) && is_nondet_builtin(c.callee)) {
          VarId v = declare(d.name, d.line, d.col, global);
          add_edge(cur, next, CfaEdge::Kind::Decl, v, Expr::nondet(d.line), true, d.line);
        } else {
          LocId mid = new_loc();
          VarId ret = inline_call(c, cur, mid, /*want_value=*/true);
          VarId v = declare(d.name, d.line, d.col, global);
          add_edge(mid, next, CfaEdge::Kind::Decl, v, Expr::variable(vars_[ret].name, ret, d.line),
                   true, d.line);
        }
      } else {
        ExprPtr init = resolve(d.init->expr);
        VarId v = declare(d.name, d.line, d.col, global);
        add_edge(cur, next, CfaEdge::Kind::Decl, v, init, true, d.line);
      }
      cur = next;
    }
  }

  void lower_sequence(const std::vector<StmtPtr>& body, LocId from, LocId to, int line) {
    if (body.empty()) {
      skip(from, to, line);
      return;
    }
    LocId cur = from;
    for (std::size_t i = 0; i < body.size(); ++i) {
      LocId next = i + 1 == body.size() ? to : new_loc();
      lower_stmt(*body[i], cur, next);
      cur = next;
    }
  }

  LocId label_loc(const std::string& name) {
    auto it = frame().labels.find(name);
    if (it != frame().labels.end()) return it->second;
    LocId l = new_loc();
    frame().labels[name] = l;
    return l;
  }

  /// Loop heads must not coincide with the entry location.
  LocId loop_head(LocId from, int line) {
    if (from != entry_) return from;
    LocId head = new_loc();
    skip(from, head, line);
    return head;
  }

  void lower_stmt(const Stmt& s, LocId from, LocId to) {
    switch (s.kind) {
      case Stmt::Kind::Skip: skip(from, to, s.line); break;
      case Stmt::Kind::Block:
        frame().scopes.emplace_back();
        lower_sequence(s.body, from, to, s.line);
        frame().scopes.pop_back();
        break;
      case Stmt::Kind::Decl: lower_decl(s, from, to, false); break;
      case Stmt::Kind::Assign: lower_assign(s, from, to); break;
      case Stmt::Kind::CallStmt: lower_call_stmt(s, from, to); break;
      case Stmt::Kind::If: {
        ExprPtr c = resolve(s.cond);
        LocId t = new_loc();
        add_edge(from, t, CfaEdge::Kind::Assume, kNoVar, c, true, s.line);
        lower_stmt(*s.then_branch, t, to);
        if (s.else_branch) {
          LocId e = new_loc();
          add_edge(from, e, CfaEdge::Kind::Assume, kNoVar, c, false, s.line);
          lower_stmt(*s.else_branch, e, to);
        } else {
          add_edge(from, to, CfaEdge::Kind::Assume, kNoVar, c, false, s.line);
        }
        break;
      }
      case Stmt::Kind::While: {
        ExprPtr c = resolve(s.cond);
        LocId head = loop_head(from, s.line);
        LocId body = new_loc();
        add_edge(head, body, CfaEdge::Kind::Assume, kNoVar, c, true, s.line);
        frame().loops.push_back(Loop{to, head});
        lower_stmt(*s.then_branch, body, head);
        frame().loops.pop_back();
        add_edge(head, to, CfaEdge::Kind::Assume, kNoVar, c, false, s.line);
        break;
      }
      case Stmt::Kind::For: lower_for(s, from, to); break;
      case Stmt::Kind::Goto:
        frame().label_use_line.emplace(s.target, s.line);
        skip(from, label_loc(s.target), s.line);
        break;
      case Stmt::Kind::Label: {
        if (!frame().labels_defined.insert(s.target).second)
          throw FrontendError(Err::Syntax, s.line, s.col, "duplicate label '" + s.target + "'");
        LocId l = label_loc(s.target);
        skip(from, l, s.line);
        lower_stmt(*s.then_branch, l, to);
        break;
      }
      case Stmt::Kind::Return:
        if (s.cond && frame().ret != kNoVar) {
          add_edge(from, frame().exit, CfaEdge::Kind::Assign, frame().ret, resolve(s.cond), true,
                   s.line);
        } else {
          if (s.cond) resolve(s.cond);
          skip(from, frame().exit, s.line);
        }
        break;
      case Stmt::Kind::Break:
      case Stmt::Kind::Continue: {
        if (frame().loops.empty())
          throw FrontendError(Err::Syntax, s.line, s.col,
                              s.kind == Stmt::Kind::Break ? "break outside loop"
                                                          : "continue outside loop");
        const Loop& lp = frame().loops.back();
        skip(from, s.kind == Stmt::Kind::Break ? lp.break_to : lp.continue_to, s.line);
        break;
      }
    }
  }

  void lower_for(const Stmt& s, LocId from, LocId to) {
    frame().scopes.emplace_back();
    LocId head = from;
    if (s.init) {
      head = new_loc();
      lower_stmt(*s.init, from, head);
    } else {
      head = loop_head(from, s.line);
    }
    ExprPtr c = s.cond ? resolve(s.cond) : nullptr;
    LocId body = new_loc();
    if (c) {
      add_edge(head, body, CfaEdge::Kind::Assume, kNoVar, c, true, s.line);
      add_edge(head, to, CfaEdge::Kind::Assume, kNoVar, c, false, s.line);
    } else {
      skip(head, body, s.line);
    }
    LocId cont = s.step ? new_loc() : head;
    frame().loops.push_back(Loop{to, cont});
    lower_stmt(*s.then_branch, body, cont);
    frame().loops.pop_back();
    if (s.step) lower_stmt(*s.step, cont, head);
    frame().scopes.pop_back();
  }

  void lower_assign(const Stmt& s, LocId from, LocId to) {
    const Rhs& rhs = *s.rhs;
    if (rhs.call) {
      const Call& c = *rhs.call;
      if (!user_defined(c.callee) && is_nondet_builtin(c.callee)) {
        VarId v = resolve(s.target, s.line, s.col);
        add_edge(from, to, CfaEdge::Kind::Assign, v, Expr::nondet(s.line), true, s.line);
        return;
      }
      LocId mid = new_loc();
      VarId ret = inline_call(c, from, mid, /*want_value=*/true);
      VarId v = resolve(s.target, s.line, s.col);
      add_edge(mid, to, CfaEdge::Kind::Assign, v, Expr::variable(vars_[ret].name, ret, s.line),
               true, s.line);
      return;
    }
    VarId v = resolve(s.target, s.line, s.col);
    add_edge(from, to, CfaEdge::Kind::Assign, v, resolve(rhs.expr), true, s.line);
  }

  void lower_call_stmt(const Stmt& s, LocId from, LocId to) {
    const Call& c = *s.call;
    if (!user_defined(c.callee)) {
      auto arity = [&](std::size_t n) {
        if (c.args.size() != n)
          throw FrontendError(Err::Syntax, c.line, s.col,
                              c.callee + " expects " + std::to_string(n) + " argument(s)");
      };
      if (is_assert_builtin(c.callee)) {
        arity(1);
        ExprPtr e = resolve(c.args[0]);
        add_edge(from, to, CfaEdge::Kind::Assume, kNoVar, e, true, c.line);
        add_edge(from, new_error_loc(), CfaEdge::Kind::Assume, kNoVar, e, false, c.line);
        return;
      }
      if (is_assume_builtin(c.callee)) {
        arity(1);
        add_edge(from, to, CfaEdge::Kind::Assume, kNoVar, resolve(c.args[0]), true, c.line);
        return;
      }
      if (is_error_builtin(c.callee)) {
        arity(0);
        skip(from, new_error_loc(), c.line);
        return;
      }
      if (is_nondet_builtin(c.callee)) {
        skip(from, to, c.line);
        return;
      }
    }
    inline_call(c, from, to, /*want_value=*/false);
  }

  /// Inlines `call` between `from` and `to`; returns the return-value variable
  /// when `want_value`.
  VarId inline_call(const Call& call, LocId from, LocId to, bool want_value) {
    const Function* fn = prog_.find_function(call.callee);
    if (fn == nullptr)
      throw FrontendError(Err::UndefinedFunction, call.line, 0,
                          "call to undefined function '" + call.callee + "'");
    for (const auto& f : frames_)
      if (f.function == fn->name)
        throw FrontendError(Err::Recursion, call.line, 0,
                            "recursive call to '" + fn->name + "'");
    if (fn->params.size() != call.args.size())
      throw FrontendError(Err::Syntax, call.line, 0,
                          "'" + fn->name + "' expects " + std::to_string(fn->params.size()) +
                              " argument(s)");
    if (want_value && !fn->returns_value)
      throw FrontendError(Err::Syntax, call.line, 0, "void function '" + fn->name + "' used as value");

    std::vector<ExprPtr> args;
    for (const auto& a : call.args) args.push_back(resolve(a));

    int k = ++call_count_[fn->name];
    Frame callee;
    callee.function = fn->name;
    callee.suffix = "@" + fn->name + "#" + std::to_string(k);
    callee.scopes.emplace_back();
    frames_.push_back(std::move(callee));

    LocId cur = from;
    for (std::size_t i = 0; i < args.size(); ++i) {
      LocId next = new_loc();
      VarId p = declare(fn->params[i], fn->line, 0, false);
      add_edge(cur, next, CfaEdge::Kind::Decl, p, args[i], true, call.line);
      cur = next;
    }
    if (fn->returns_value) {
      LocId next = new_loc();
      frame().ret = declare_hidden("ret" + frame().suffix, fn->line);
      add_edge(cur, next, CfaEdge::Kind::Decl, frame().ret, nullptr, true, fn->line);
      cur = next;
    }
    frame().exit = to;
    frame().scopes.emplace_back();
    lower_stmt(*fn->body, cur, to);
    VarId ret = frame().ret;
    finish_frame(*fn);
    frames_.pop_back();
    return ret;
  }

  void finish_frame(const Function& fn) {
    for (const auto& [name, line] : frame().label_use_line)
      if (frame().labels_defined.count(name) == 0)
        throw FrontendError(Err::Syntax, line, 0,
                            "goto to undefined label '" + name + "' in " + fn.name);
  }

  Cfa prune() {
    std::vector<std::vector<std::int32_t>> out(is_error_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i)
      out[edges_[i].source].push_back(static_cast<std::int32_t>(i));

    std::vector<LocId> order;
    std::vector<LocId> remap(is_error_.size(), -1);
    std::vector<LocId> stack{entry_};
    while (!stack.empty()) {
      LocId l = stack.back();
      stack.pop_back();
      if (remap[l] >= 0) continue;
      remap[l] = static_cast<LocId>(order.size());
      order.push_back(l);
      const auto& oe = out[l];
      for (auto it = oe.rbegin(); it != oe.rend(); ++it) {
        LocId t = edges_[*it].target;
        if (remap[t] < 0) stack.push_back(t);
      }
    }

    Cfa cfa;
    cfa.num_locations = static_cast<std::int32_t>(order.size());
    cfa.entry = 0;
    cfa.is_error.assign(order.size(), false);
    for (std::size_t i = 0; i < order.size(); ++i) cfa.is_error[i] = is_error_[order[i]];
    cfa.out.resize(order.size());
    for (LocId old : order) {
      for (std::int32_t ei : out[old]) {
        CfaEdge e = edges_[ei];
        e.source = remap[e.source];
        e.target = remap[e.target];
        cfa.out[e.source].push_back(static_cast<std::int32_t>(cfa.edges.size()));
        cfa.edges.push_back(std::move(e));
      }
    }
    cfa.variables = vars_;
    return cfa;
  }

  const Program& prog_;
  LocId entry_ = 0;
  std::vector<bool> is_error_;
  std::vector<CfaEdge> edges_;
  std::vector<VarInfo> vars_;
  std::unordered_set<std::string> used_names_;
  std::unordered_map<std::string, VarId> globals_;
  std::vector<Frame> frames_;
  std::map<std::string, int> call_count_;
};

}  // namespace

Cfa lower(const Program& program) { return Lowerer(program).run(); }

Cfa build_cfa(std::string_view source) { return lower(parse(source)); }

}  // namespace domcheck
