#pragma once

// Random MiniC program generator for property tests. Programs are
// loop-bounded (counted `for` loops with constant trip counts) so both the
// analyses and the brute-force interpreter terminate.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

struct GenOptions {
  int num_vars = 3;
  int max_stmts = 6;
  int max_depth = 2;
  bool allow_mul = true;      // * / % << >>
  bool allow_bitops = true;   // & | ^ ~
  bool allow_nondet = true;
  bool allow_loops = true;
  std::vector<int> constants = {0, 1, 2, 3, 5, 7};
};

class ProgramGen {
 public:
  ProgramGen(std::uint64_t seed, GenOptions opt) : rng_(seed), opt_(std::move(opt)) {}

  std::string program() {
    out_.str("");
    loop_counter_ = 0;
    out_ << "int main() {\n";
    for (int i = 0; i < opt_.num_vars; ++i) {
      int kind = pick(opt_.allow_nondet ? 3 : 2);
      out_ << "  int v" << i;
      if (kind == 0) out_ << " = " << constant();
      else if (kind == 2) out_ << " = nondet()";
      else if (!opt_.allow_nondet) out_ << " = " << constant();
      out_ << ";\n";
    }
    block(1, 1 + pick(opt_.max_stmts));
    out_ << "  return 0;\n}\n";
    return out_.str();
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string var() { return "v" + std::to_string(pick(opt_.num_vars)); }
  int constant() { return opt_.constants[pick(static_cast<int>(opt_.constants.size()))]; }

  std::string atom() { return pick(3) == 0 ? std::to_string(constant()) : var(); }

  std::string arith(int depth) {
    if (depth <= 0 || pick(3) == 0) return atom();
    std::vector<const char*> ops = {"+", "-"};
    if (opt_.allow_bitops) ops.insert(ops.end(), {"&", "|", "^"});
    if (opt_.allow_mul) ops.insert(ops.end(), {"*", "/", "%", "<<", ">>"});
    const char* op = ops[pick(static_cast<int>(ops.size()))];
    std::string rhs = arith(depth - 1);
    if ((op[0] == '/' || op[0] == '%') && rhs == "0") rhs = "3";
    if (op[0] == '<' || op[0] == '>') rhs = std::to_string(pick(4));
    if (opt_.allow_bitops && pick(10) == 0) return "~(" + arith(depth - 1) + ")";
    return "(" + arith(depth - 1) + " " + op + " " + rhs + ")";
  }

  std::string cond(int depth) {
    int k = pick(depth > 0 ? 6 : 4);
    static const char* rel[] = {"==", "!=", "<", ">", "<=", ">="};
    switch (k) {
      case 0: return var();
      case 1: return var() + " == " + std::to_string(constant());
      case 2: return var() + " " + rel[pick(6)] + " " + arith(1);
      case 3: return "!" + var();
      case 4: return "(" + cond(depth - 1) + ") && (" + cond(depth - 1) + ")";
      default: return "(" + cond(depth - 1) + ") || (" + cond(depth - 1) + ")";
    }
  }

  void indent(int level) {
    for (int i = 0; i < level; ++i) out_ << "  ";
  }

  void block(int level, int n) {
    for (int i = 0; i < n; ++i) statement(level);
  }

  void statement(int level) {
    int k = pick(level <= opt_.max_depth ? 8 : 4);
    indent(level);
    switch (k) {
      case 0:
      case 1:
        out_ << var() << " = " << arith(2) << ";\n";
        break;
      case 2:
        if (opt_.allow_nondet && pick(3) == 0) out_ << var() << " = nondet();\n";
        else out_ << var() << " = " << constant() << ";\n";
        break;
      case 3:
        out_ << "assert(" << cond(1) << ");\n";
        break;
      case 4:
      case 5:
        out_ << "if (" << cond(1) << ") {\n";
        block(level + 1, 1 + pick(2));
        indent(level);
        if (pick(2) == 0) {
          out_ << "} else {\n";
          block(level + 1, 1 + pick(2));
          indent(level);
        }
        out_ << "}\n";
        break;
      case 6:
        if (opt_.allow_loops) {
          int id = loop_counter_++;
          out_ << "for (int i" << id << " = 0; i" << id << " < " << 1 + pick(3) << "; i" << id
               << "++) {\n";
          block(level + 1, 1 + pick(2));
          indent(level);
          out_ << "}\n";
        } else {
          out_ << "assume(" << cond(0) << ");\n";
        }
        break;
      default:
        out_ << "assume(" << cond(0) << ");\n";
        break;
    }
  }

  std::mt19937_64 rng_;
  GenOptions opt_;
  std::ostringstream out_;
  int loop_counter_ = 0;
};

}  // namespace testutil
