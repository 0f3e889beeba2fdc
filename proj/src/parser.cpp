#include "domcheck/parser.hpp"
#include "domcheck/errors.hpp"

#include <cctype>
#include <cstring>
#include <cstdint>
#include <set>

namespace domcheck {
namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::int64_t number = 0;
  int line = 1;
  int col = 1;
};

using Err = FrontendError::Kind;

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Token::Kind::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          t.text.push_back(advance());
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number(t);
      } else if (c == '#') {
        throw FrontendError(Err::UnsupportedConstruct, line_, col_, "preprocessor directives");
      } else if (c == '"' || c == '\'') {
        throw FrontendError(Err::UnsupportedConstruct, line_, col_, "string and character literals");
      } else {
        lex_punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (starts_with("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (starts_with("/*")) {
        int l = line_, c = col_;
        advance();
        advance();
        while (pos_ < src_.size() && !starts_with("*/")) advance();
        if (pos_ >= src_.size()) throw FrontendError(Err::Syntax, l, c, "unterminated comment");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  void lex_number(Token& t) {
    t.kind = Token::Kind::Number;
    std::uint64_t v = 0;
    int base = 10;
    if (starts_with("0x") || starts_with("0X")) {
      advance();
      advance();
      base = 16;
    }
    bool any = false;
    while (pos_ < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[pos_]))) {
      char c = src_[pos_];
      int d = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                                                          : std::tolower(c) - 'a' + 10;
      if (d >= base) break;
      v = v * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(d);
      if (v > 0xFFFFFFFFull)
        throw FrontendError(Err::Syntax, t.line, t.col, "integer literal out of 32-bit range");
      t.text.push_back(advance());
      any = true;
    }
    if (!any) throw FrontendError(Err::Syntax, t.line, t.col, "malformed integer literal");
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
      throw FrontendError(Err::UnsupportedConstruct, t.line, t.col, "floating point literals");
    while (pos_ < src_.size() && src_[pos_] != '\0' && std::strchr("uUlL", src_[pos_]) != nullptr)
      advance();
    t.number = static_cast<std::int64_t>(v);
  }

  void lex_punct(Token& t) {
    static const char* const kPuncts[] = {
        "<<=", ">>=", "&&", "||", "==", "!=", "<=", ">=", "<<", ">>", "++", "--", "+=", "-=",
        "*=",  "/=",  "%=", "&=", "|=", "^=", "->", "+",  "-",  "*",  "/",  "%",  "<",  ">",
        "=",   "!",   "~",  "&",  "|",  "^",  "(",  ")",  "{",  "}",  ";",  ",",  ":",  "[",
        "]",   ".",   "?"};
    t.kind = Token::Kind::Punct;
    for (const char* p : kPuncts) {
      if (starts_with(p)) {
        for (std::size_t i = 0; p[i] != '\0'; ++i) t.text.push_back(advance());
        return;
      }
    }
    throw FrontendError(Err::Syntax, line_, col_, std::string("unexpected character '") +
                                                      src_[pos_] + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string>& unsupported_type_words() {
  static const std::set<std::string> words = {
      "char", "float", "double", "long", "short", "unsigned", "signed", "struct",
      "union", "enum", "typedef", "_Bool", "bool", "sizeof"};
  return words;
}

bool is_qualifier(const std::string& s) {
  return s == "static" || s == "const" || s == "volatile" || s == "extern" || s == "inline";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program prog;
    while (!at_end()) {
      skip_qualifiers();
      const Token& ty = peek();
      check_type_word(ty);
      bool is_void = false;
      if (accept_ident("void")) {
        is_void = true;
      } else {
        expect_ident("int");
      }
      reject_pointer();
      Token name = expect_name();
      if (accept("(")) {
        Function f;
        f.name = name.text;
        f.returns_value = !is_void;
        f.line = name.line;
        f.params = params();
        if (accept(";")) continue;  // prototype
        f.body = block();
        if (prog.find_function(f.name) != nullptr)
          throw FrontendError(Err::Syntax, name.line, name.col, "redefinition of " + f.name);
        prog.functions.push_back(std::move(f));
      } else {
        if (is_void) throw error(name, "variable declared void");
        prog.globals.push_back(declaration_rest(name, ty));
      }
    }
    if (prog.functions.empty())
      throw FrontendError(Err::Syntax, peek().line, peek().col, "program defines no function");
    return prog;
  }

 private:
  // -- token helpers -------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  bool is_punct(const std::string& p, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Punct && peek(k).text == p;
  }
  bool is_ident(const std::string& s, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Ident && peek(k).text == s;
  }

  bool accept(const std::string& p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  bool accept_ident(const std::string& s) {
    if (!is_ident(s)) return false;
    next();
    return true;
  }

  FrontendError error(const Token& t, const std::string& msg) const {
    return FrontendError(Err::Syntax, t.line, t.col, msg);
  }

  void expect(const std::string& p) {
    if (!accept(p)) {
      const Token& t = peek();
      throw error(t, "expected '" + p + "' but found '" +
                         (t.kind == Token::Kind::End ? std::string("end of input") : t.text) + "'");
    }
  }
  void expect_ident(const std::string& s) {
    if (!accept_ident(s)) throw error(peek(), "expected '" + s + "'");
  }

  static bool is_keyword(const std::string& s) {
    static const std::set<std::string> kw = {"int", "void", "if", "else", "while", "for",
                                             "goto", "return", "break", "continue"};
    return kw.count(s) > 0;
  }

  Token expect_name() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident || is_keyword(t.text))
      throw error(t, "expected identifier");
    check_type_word(t);
    return next();
  }

  void check_type_word(const Token& t) const {
    if (t.kind == Token::Kind::Ident && unsupported_type_words().count(t.text) > 0)
      throw FrontendError(Err::UnsupportedConstruct, t.line, t.col, "type or keyword '" + t.text + "'");
  }

  void skip_qualifiers() {
    while (peek().kind == Token::Kind::Ident && is_qualifier(peek().text)) next();
  }

  void reject_pointer() {
    if (is_punct("*") || is_punct("&"))
      throw FrontendError(Err::UnsupportedConstruct, peek().line, peek().col, "pointers");
  }

  // -- declarations ----------------------------------------------------------

  std::vector<std::string> params() {
    std::vector<std::string> out;
    if (accept(")")) return out;
    if (is_ident("void") && is_punct(")", 1)) {
      next();
      next();
      return out;
    }
    do {
      skip_qualifiers();
      check_type_word(peek());
      expect_ident("int");
      reject_pointer();
      out.push_back(expect_name().text);
      if (is_punct("["))
        throw FrontendError(Err::UnsupportedConstruct, peek().line, peek().col, "arrays");
    } while (accept(","));
    expect(")");
    return out;
  }

  StmtPtr declaration_rest(const Token& first_name, const Token& type_tok) {
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Decl;
    s->line = type_tok.line;
    s->col = type_tok.col;
    Token name = first_name;
    for (;;) {
      if (is_punct("["))
        throw FrontendError(Err::UnsupportedConstruct, peek().line, peek().col, "arrays");
      Declarator d;
      d.name = name.text;
      d.line = name.line;
      d.col = name.col;
      if (accept("=")) d.init = rhs();
      s->decls.push_back(std::move(d));
      if (!accept(",")) break;
      reject_pointer();
      name = expect_name();
    }
    expect(";");
    return s;
  }

  // -- statements -------------------------------------------------------------

  StmtPtr block() {
    const Token& open = peek();
    expect("{");
    auto s = std::make_shared<Stmt>();
    s->kind = Stmt::Kind::Block;
    s->line = open.line;
    s->col = open.col;
    while (!is_punct("}")) {
      if (at_end()) throw error(peek(), "unterminated block");
      s->body.push_back(statement());
    }
    expect("}");
    return s;
  }

  std::shared_ptr<Stmt> make(Stmt::Kind k, const Token& at) {
    auto s = std::make_shared<Stmt>();
    s->kind = k;
    s->line = at.line;
    s->col = at.col;
    return s;
  }

  StmtPtr statement() {
    const Token t = peek();
    if (is_punct("{")) return block();
    if (accept(";")) return make(Stmt::Kind::Skip, t);
    if (t.kind == Token::Kind::Ident) {
      check_type_word(t);
      if (is_qualifier(t.text) || t.text == "int") {
        skip_qualifiers();
        const Token ty = peek();
        expect_ident("int");
        reject_pointer();
        Token name = expect_name();
        return declaration_rest(name, ty);
      }
      if (t.text == "if") return if_statement();
      if (t.text == "while") {
        next();
        expect("(");
        auto s = make(Stmt::Kind::While, t);
        s->cond = expression();
        expect(")");
        s->then_branch = statement();
        return s;
      }
      if (t.text == "for") return for_statement();
      if (t.text == "goto") {
        next();
        auto s = make(Stmt::Kind::Goto, t);
        s->target = expect_name().text;
        expect(";");
        return s;
      }
      if (t.text == "break" || t.text == "continue") {
        next();
        expect(";");
        return make(t.text == "break" ? Stmt::Kind::Break : Stmt::Kind::Continue, t);
      }
      if (t.text == "return") {
        next();
        auto s = make(Stmt::Kind::Return, t);
        if (!is_punct(";")) s->cond = expression();
        expect(";");
        return s;
      }
      if (t.text == "else") throw error(t, "'else' without 'if'");
      if (is_punct(":", 1)) {
        next();
        next();
        auto s = make(Stmt::Kind::Label, t);
        s->target = t.text;
        s->then_branch = is_punct("}") ? make(Stmt::Kind::Skip, t) : statement();
        return s;
      }
    }
    StmtPtr s = simple_statement();
    expect(";");
    return s;
  }

  StmtPtr if_statement() {
    const Token t = next();
    auto s = make(Stmt::Kind::If, t);
    expect("(");
    s->cond = expression();
    expect(")");
    s->then_branch = statement();
    if (accept_ident("else")) s->else_branch = statement();
    return s;
  }

  StmtPtr for_statement() {
    const Token t = next();
    auto s = make(Stmt::Kind::For, t);
    expect("(");
    if (!accept(";")) {
      if (is_ident("int")) {
        const Token ty = next();
        Token name = expect_name();
        s->init = declaration_rest(name, ty);  // consumes ';'
      } else {
        s->init = simple_statement();
        expect(";");
      }
    }
    if (!is_punct(";")) s->cond = expression();
    expect(";");
    if (!is_punct(")")) s->step = simple_statement();
    expect(")");
    s->then_branch = statement();
    return s;
  }

  /// Assignment, compound assignment, increment, or call (no trailing ';').
  StmtPtr simple_statement() {
    const Token t = peek();
    if (is_punct("++") || is_punct("--")) {
      bool inc = next().text == "++";
      Token name = expect_name();
      return increment(name, inc);
    }
    if (t.kind != Token::Kind::Ident) {
      if (is_punct("*"))
        throw FrontendError(Err::UnsupportedConstruct, t.line, t.col, "pointers");
      throw error(t, "expected statement");
    }
    Token name = expect_name();
    if (is_punct("(")) {
      auto s = make(Stmt::Kind::CallStmt, t);
      s->call = call_rest(name);
      return s;
    }
    if (is_punct("[") || is_punct(".") || is_punct("->"))
      throw FrontendError(Err::UnsupportedConstruct, peek().line, peek().col,
                          "arrays, structs and pointers");
    if (is_punct("++") || is_punct("--")) return increment(name, next().text == "++");
    auto s = make(Stmt::Kind::Assign, t);
    s->target = name.text;
    if (accept("=")) {
      s->rhs = rhs();
      return s;
    }
    static const std::pair<const char*, BinOp> kCompound[] = {
        {"+=", BinOp::Add},    {"-=", BinOp::Sub},   {"*=", BinOp::Mul},
        {"/=", BinOp::Div},    {"%=", BinOp::Mod},   {"&=", BinOp::BitAnd},
        {"|=", BinOp::BitOr},  {"^=", BinOp::BitXor}, {"<<=", BinOp::Shl},
        {">>=", BinOp::Shr}};
    for (const auto& [p, op] : kCompound) {
      if (is_punct(p)) {
        const Token opt = next();
        ExprPtr r = expression();
        check_division(op, r, opt);
        s->rhs = Rhs{Expr::binary(op, Expr::variable(name.text, kNoVar, name.line), r, opt.line), {}};
        return s;
      }
    }
    throw error(peek(), "expected assignment");
  }

  StmtPtr increment(const Token& name, bool inc) {
    auto s = make(Stmt::Kind::Assign, name);
    s->target = name.text;
    s->rhs = Rhs{Expr::binary(inc ? BinOp::Add : BinOp::Sub,
                              Expr::variable(name.text, kNoVar, name.line),
                              Expr::constant(1, name.line), name.line),
                 {}};
    return s;
  }

  Call call_rest(const Token& name) {
    Call c;
    c.callee = name.text;
    c.line = name.line;
    expect("(");
    if (!accept(")")) {
      do c.args.push_back(expression());
      while (accept(","));
      expect(")");
    }
    return c;
  }

  Rhs rhs() {
    if (peek().kind == Token::Kind::Ident && is_punct("(", 1) && !is_keyword(peek().text)) {
      const Token name = next();
      Rhs r;
      r.call = call_rest(name);
      if (!is_punct(";") && !is_punct(","))
        throw FrontendError(Err::UnsupportedConstruct, name.line, name.col,
                            "function calls are only allowed as a full right-hand side");
      return r;
    }
    return Rhs{expression(), {}};
  }

  // -- expressions (C precedence) -------------------------------------------------

  ExprPtr expression() { return logical_or(); }

  ExprPtr logical_or() {
    ExprPtr l = logical_and();
    while (is_punct("||")) {
      int line = next().line;
      l = Expr::binary(BinOp::LogOr, l, logical_and(), line);
    }
    return l;
  }

  ExprPtr logical_and() {
    ExprPtr l = bit_or();
    while (is_punct("&&")) {
      int line = next().line;
      l = Expr::binary(BinOp::LogAnd, l, bit_or(), line);
    }
    return l;
  }

  ExprPtr bit_or() {
    ExprPtr l = bit_xor();
    while (is_punct("|")) {
      int line = next().line;
      l = Expr::binary(BinOp::BitOr, l, bit_xor(), line);
    }
    return l;
  }

  ExprPtr bit_xor() {
    ExprPtr l = bit_and();
    while (is_punct("^")) {
      int line = next().line;
      l = Expr::binary(BinOp::BitXor, l, bit_and(), line);
    }
    return l;
  }

  ExprPtr bit_and() {
    ExprPtr l = equality();
    while (is_punct("&")) {
      int line = next().line;
      l = Expr::binary(BinOp::BitAnd, l, equality(), line);
    }
    return l;
  }

  ExprPtr equality() {
    ExprPtr l = relational();
    while (is_punct("==") || is_punct("!=")) {
      const Token& t = next();
      BinOp op = t.text == "==" ? BinOp::Eq : BinOp::Ne;
      l = Expr::binary(op, l, relational(), t.line);
    }
    return l;
  }

  ExprPtr relational() {
    ExprPtr l = shift();
    for (;;) {
      BinOp op;
      if (is_punct("<")) op = BinOp::Lt;
      else if (is_punct(">")) op = BinOp::Gt;
      else if (is_punct("<=")) op = BinOp::Le;
      else if (is_punct(">=")) op = BinOp::Ge;
      else return l;
      int line = next().line;
      l = Expr::binary(op, l, shift(), line);
    }
  }

  ExprPtr shift() {
    ExprPtr l = additive();
    while (is_punct("<<") || is_punct(">>")) {
      const Token& t = next();
      BinOp op = t.text == "<<" ? BinOp::Shl : BinOp::Shr;
      l = Expr::binary(op, l, additive(), t.line);
    }
    return l;
  }

  ExprPtr additive() {
    ExprPtr l = multiplicative();
    while (is_punct("+") || is_punct("-")) {
      const Token& t = next();
      BinOp op = t.text == "+" ? BinOp::Add : BinOp::Sub;
      l = Expr::binary(op, l, multiplicative(), t.line);
    }
    return l;
  }

  void check_division(BinOp op, const ExprPtr& r, const Token& at) const {
    if ((op == BinOp::Div || op == BinOp::Mod) && r->kind == Expr::Kind::Const && r->value == 0)
      throw FrontendError(Err::Syntax, at.line, at.col, "division by constant zero");
  }

  ExprPtr multiplicative() {
    ExprPtr l = unary();
    while (is_punct("*") || is_punct("/") || is_punct("%")) {
      const Token t = next();
      BinOp op = t.text == "*" ? BinOp::Mul : t.text == "/" ? BinOp::Div : BinOp::Mod;
      ExprPtr r = unary();
      check_division(op, r, t);
      l = Expr::binary(op, l, r, t.line);
    }
    return l;
  }

  ExprPtr unary() {
    const Token t = peek();
    if (accept("!")) return Expr::unary(UnOp::Not, unary(), t.line);
    if (accept("~")) return Expr::unary(UnOp::BitNot, unary(), t.line);
    if (accept("+")) return unary();
    if (accept("-")) {
      ExprPtr e = unary();
      if (e->kind == Expr::Kind::Const)
        return Expr::constant(static_cast<std::int32_t>(0u - static_cast<std::uint32_t>(e->value)),
                              t.line);
      return Expr::binary(BinOp::Sub, Expr::constant(0, t.line), e, t.line);
    }
    if (is_punct("*") || is_punct("&"))
      throw FrontendError(Err::UnsupportedConstruct, t.line, t.col, "pointers");
    if (is_punct("++") || is_punct("--"))
      throw FrontendError(Err::UnsupportedConstruct, t.line, t.col,
                          "increment inside expressions");
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    if (is_punct("[") || is_punct(".") || is_punct("->"))
      throw FrontendError(Err::UnsupportedConstruct, peek().line, peek().col,
                          "arrays, structs and pointers");
    if (is_punct("++") || is_punct("--"))
      throw FrontendError(Err::UnsupportedConstruct, peek().line, peek().col,
                          "increment inside expressions");
    if (is_punct("?"))
      throw FrontendError(Err::UnsupportedConstruct, peek().line, peek().col,
                          "conditional operator");
    return e;
  }

  ExprPtr primary() {
    const Token t = peek();
    if (accept("(")) {
      if (peek().kind == Token::Kind::Ident && (peek().text == "int" ||
                                                unsupported_type_words().count(peek().text) > 0))
        throw FrontendError(Err::UnsupportedConstruct, t.line, t.col, "casts");
      ExprPtr e = expression();
      expect(")");
      return e;
    }
    if (t.kind == Token::Kind::Number) {
      next();
      return Expr::constant(static_cast<std::int32_t>(static_cast<std::uint32_t>(t.number)),
                            t.line);
    }
    if (t.kind == Token::Kind::Ident) {
      Token name = expect_name();
      if (is_punct("("))
        throw FrontendError(Err::UnsupportedConstruct, t.line, t.col,
                            "function calls are only allowed as a full right-hand side");
      return Expr::variable(name.text, kNoVar, name.line);
    }
    throw error(t, "expected expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse(std::string_view source) {
  Lexer lexer(source);
  Parser parser(lexer.run());
  return parser.program();
}

}  // namespace domcheck
