#include "domcheck/ast.hpp"
#include "domcheck/errors.hpp"

#include <sstream>

namespace domcheck {

FrontendError::FrontendError(Kind kind, int line, int col, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " at " + std::to_string(line) + ":" +
                         std::to_string(col) + ": " + message),
      kind_(kind), line_(line), col_(col), message_(message) {}

const char* to_string(FrontendError::Kind kind) {
  switch (kind) {
    case FrontendError::Kind::Syntax: return "SyntaxError";
    case FrontendError::Kind::UnsupportedConstruct: return "UnsupportedConstruct";
    case FrontendError::Kind::Recursion: return "RecursionError";
    case FrontendError::Kind::UndefinedFunction: return "UndefinedFunction";
    case FrontendError::Kind::UndeclaredVariable: return "UndeclaredVariable";
  }
  return "?";
}

const char* to_string(UnOp op) {
  switch (op) {
    case UnOp::Not: return "!";
    case UnOp::BitNot: return "~";
  }
  return "?";
}

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Shl: return "<<";
    case BinOp::Shr: return ">>";
    case BinOp::BitAnd: return "&";
    case BinOp::BitOr: return "|";
    case BinOp::BitXor: return "^";
    case BinOp::LogAnd: return "&&";
    case BinOp::LogOr: return "||";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Gt: return ">";
    case BinOp::Le: return "<=";
    case BinOp::Ge: return ">=";
  }
  return "?";
}

bool is_relational(BinOp op) {
  switch (op) {
    case BinOp::Eq: case BinOp::Ne: case BinOp::Lt:
    case BinOp::Gt: case BinOp::Le: case BinOp::Ge:
      return true;
    default:
      return false;
  }
}

bool is_logical(BinOp op) { return op == BinOp::LogAnd || op == BinOp::LogOr; }

ExprPtr Expr::constant(std::int32_t v, int line) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Const;
  e->value = v;
  e->line = line;
  return e;
}

ExprPtr Expr::variable(std::string name, VarId id, int line) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->name = std::move(name);
  e->var = id;
  e->line = line;
  return e;
}

ExprPtr Expr::nondet(int line) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Nondet;
  e->line = line;
  return e;
}

ExprPtr Expr::unary(UnOp op, ExprPtr operand, int line) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Unary;
  e->uop = op;
  e->lhs = std::move(operand);
  e->line = line;
  return e;
}

ExprPtr Expr::binary(BinOp op, ExprPtr l, ExprPtr r, int line) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Binary;
  e->bop = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  e->line = line;
  return e;
}

bool Expr::is_boolean_valued() const {
  if (kind == Kind::Unary) return uop == UnOp::Not;
  if (kind == Kind::Binary) return is_logical(bop) || is_relational(bop);
  return false;
}

namespace {

void print(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const: os << e.value; break;
    case Expr::Kind::Var: os << e.name; break;
    case Expr::Kind::Nondet: os << "nondet()"; break;
    case Expr::Kind::Unary:
      os << to_string(e.uop);
      if (e.lhs->kind == Expr::Kind::Binary) {
        os << '(';
        print(os, *e.lhs);
        os << ')';
      } else {
        print(os, *e.lhs);
      }
      break;
    case Expr::Kind::Binary: {
      auto side = [&os](const Expr& s) {
        bool paren = s.kind == Expr::Kind::Binary;
        if (paren) os << '(';
        print(os, s);
        if (paren) os << ')';
      };
      side(*e.lhs);
      os << ' ' << to_string(e.bop) << ' ';
      side(*e.rhs);
      break;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(os, e);
  return os.str();
}

void collect_vars(const Expr& e, std::vector<VarId>& out) {
  switch (e.kind) {
    case Expr::Kind::Var: out.push_back(e.var); break;
    case Expr::Kind::Unary: collect_vars(*e.lhs, out); break;
    case Expr::Kind::Binary:
      collect_vars(*e.lhs, out);
      collect_vars(*e.rhs, out);
      break;
    default: break;
  }
}

const Function* Program::find_function(const std::string& name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

}  // namespace domcheck
