#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace domcheck {

using VarId = std::int32_t;
constexpr VarId kNoVar = -1;

enum class UnOp : std::uint8_t { Not, BitNot };

enum class BinOp : std::uint8_t {
  Add, Sub, Mul, Div, Mod, Shl, Shr,
  BitAnd, BitOr, BitXor,
  LogAnd, LogOr,
  Eq, Ne, Lt, Gt, Le, Ge,
};

const char* to_string(UnOp op);
const char* to_string(BinOp op);

bool is_relational(BinOp op);   // == != < > <= >=
bool is_logical(BinOp op);      // && ||

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree. Unary minus is desugared to `0 - e` by the
/// parser, so it never appears here.
struct Expr {
  enum class Kind : std::uint8_t { Const, Var, Nondet, Unary, Binary };

  Kind kind = Kind::Const;
  std::int32_t value = 0;   // Const
  std::string name;         // Var
  VarId var = kNoVar;       // Var, resolved by lowering
  UnOp uop = UnOp::Not;
  BinOp bop = BinOp::Add;
  ExprPtr lhs;              // Unary operand or Binary left
  ExprPtr rhs;
  int line = 0;

  static ExprPtr constant(std::int32_t v, int line = 0);
  static ExprPtr variable(std::string name, VarId id = kNoVar, int line = 0);
  static ExprPtr nondet(int line = 0);
  static ExprPtr unary(UnOp op, ExprPtr e, int line = 0);
  static ExprPtr binary(BinOp op, ExprPtr l, ExprPtr r, int line = 0);

  /// True when the value of the expression is always 0 or 1.
  bool is_boolean_valued() const;
};

std::string to_string(const Expr& e);

/// Collects every variable id occurring in `e` (with repetitions).
void collect_vars(const Expr& e, std::vector<VarId>& out);

// ---------------------------------------------------------------------------
// Statements

struct Call {
  std::string callee;
  std::vector<ExprPtr> args;
  int line = 0;
};

/// Right-hand side of an assignment or initializer: a plain expression, a
/// nondet call, or a user function call.
struct Rhs {
  ExprPtr expr;              // set unless `call` is
  std::optional<Call> call;
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Declarator {
  std::string name;
  std::optional<Rhs> init;
  int line = 0;
  int col = 0;
};

struct Stmt {
  enum class Kind : std::uint8_t {
    Decl, Assign, CallStmt, If, While, For, Goto, Label,
    Return, Break, Continue, Block, Skip,
  };

  Kind kind = Kind::Skip;
  int line = 0;
  int col = 0;

  std::vector<Declarator> decls;     // Decl
  std::string target;                // Assign target, Goto/Label name
  std::optional<Rhs> rhs;            // Assign
  std::optional<Call> call;          // CallStmt
  ExprPtr cond;                      // If/While/For condition, Return value
  StmtPtr then_branch;               // If then, While/For/Label body
  StmtPtr else_branch;               // If else
  StmtPtr init;                      // For
  StmtPtr step;                      // For
  std::vector<StmtPtr> body;         // Block
};

struct Function {
  std::string name;
  bool returns_value = false;
  std::vector<std::string> params;
  StmtPtr body;
  int line = 0;
};

struct Program {
  std::vector<StmtPtr> globals;      // Decl statements
  std::vector<Function> functions;

  const Function* find_function(const std::string& name) const;
};

}  // namespace domcheck
