#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pssc {

/// Raised by parse(). offset() is the 1-based character position of the
/// offending input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Raised by evaluation: unbound variables and domain errors (log of a
/// non-positive value, division by zero, ...). subexpression() is the
/// printed form of the node that failed.
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, std::string subexpression)
      : std::runtime_error(what + ": " + subexpression), subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

enum class NodeKind { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Apply };

enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };

std::string_view function_name(Function f);

struct Node;

/// Immutable expression handle. Copies share the underlying tree.
class Expr {
 public:
  Expr();  // constant 0
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Expr constant(double value);
  static Expr variable(std::string name);

  const Node& node() const { return *node_; }
  NodeKind kind() const;

  bool is_constant() const;
  bool is_constant(double value) const;
  bool depends_on(std::string_view var) const;

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;   // Constant
  std::string name;     // Variable
  int exponent = 0;     // Pow
  Function fn = Function::Sin;  // Apply
  Expr lhs{nullptr};    // unary operand / left child / base / argument
  Expr rhs{nullptr};    // right child
};

// Structure-preserving constructors (no simplification); used by the parser.
Expr make_neg(Expr a);
Expr make_binary(NodeKind kind, Expr a, Expr b);
Expr make_pow(Expr base, int exponent);
Expr make_apply(Function f, Expr arg);

// Lightly simplifying constructors: constant folding and 0/1 identities.
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, int exponent);
Expr apply(Function f, const Expr& arg);

/// Parses the expression grammar
///   expr    := term (('+'|'-') term)*
///   term    := factor (('*'|'/') factor)*
///   factor  := '-' factor | primary ('^' integer)?
///   primary := number | ident | ident '(' expr ')' | '(' expr ')'
Expr parse(std::string_view text);

/// Prints with the minimal parentheses needed for parse() to rebuild the
/// same tree.
std::string print(const Expr& e);

Expr diff(const Expr& e, std::string_view var);

bool structurally_equal(const Expr& a, const Expr& b);

/// Variables referenced by e, sorted and unique.
std::vector<std::string> variables(const Expr& e);

double eval(const Expr& e, const std::map<std::string, double, std::less<>>& bindings);

/// Flattened stack program for repeated evaluation against a fixed
/// coordinate ordering.
class Program {
 public:
  Program() = default;
  Program(const Expr& e, std::span<const std::string> coords);

  double operator()(std::span<const double> point) const;

  bool is_constant() const { return constant_; }

 private:
  struct Instr {
    NodeKind kind;
    Function fn;
    int arg;       // variable slot or exponent
    double value;
    const Node* source;
  };
  std::vector<Instr> code_;
  Expr root_;
  bool constant_ = true;
  std::size_t max_depth_ = 0;
};

}  // namespace pssc
