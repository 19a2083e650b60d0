#include "pssc/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <system_error>

namespace pssc {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 8> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"tan", Function::Tan},
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"sqrt", Function::Sqrt},
    {"sinh", Function::Sinh},
    {"cosh", Function::Cosh},
}};

bool lookup_function(std::string_view name, Function& out) {
  for (const auto& [n, f] : kFunctions) {
    if (n == name) {
      out = f;
      return true;
    }
  }
  return false;
}

Expr make_node(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      Expr rhs = parse_term();
      lhs = make_binary(c == '+' ? NodeKind::Add : NodeKind::Sub, lhs, rhs);
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      Expr rhs = parse_factor();
      lhs = make_binary(c == '*' ? NodeKind::Mul : NodeKind::Div, lhs, rhs);
    }
  }

  Expr parse_factor() {
    if (peek() == '-') {
      ++pos_;
      // A minus sign directly on a literal is part of the number, unless the
      // literal is raised to a power: -2^2 is -(2^2).
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        Expr number = parse_number();
        if (peek() == '^') {
          ++pos_;
          return make_neg(make_pow(number, parse_integer()));
        }
        return Expr::constant(-number.node().value);
      }
      return make_neg(parse_factor());
    }
    Expr base = parse_primary();
    if (peek() == '^') {
      ++pos_;
      return make_pow(base, parse_integer());
    }
    return base;
  }

  int parse_integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected integer exponent");
    }
    const char* first = text_.data() + start + (text_[start] == '+' ? 1 : 0);
    int value = 0;
    auto [ptr, ec] = std::from_chars(first, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("exponent out of range");
    }
    return value;
  }

  Expr parse_primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      Function fn{};
      bool is_fn = lookup_function(name, fn);
      if (peek() == '(') {
        if (!is_fn) {
          pos_ = start;
          fail("unknown function '" + name + "'");
        }
        ++pos_;
        Expr arg = parse_expr();
        if (peek() != ')') fail("expected ')'");
        ++pos_;
        return make_apply(fn, arg);
      }
      if (is_fn) fail("expected '(' after function '" + name + "'");
      return Expr::variable(std::move(name));
    }
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail("malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::constant(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Add:
    case NodeKind::Sub:
      return 1;
    case NodeKind::Mul:
    case NodeKind::Div:
      return 2;
    case NodeKind::Neg:
      return 3;
    case NodeKind::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

void print_into(const Expr& e, std::string& out) {
  const Node& n = e.node();
  auto child = [&](const Expr& c, bool parens) {
    if (parens) out += '(';
    print_into(c, out);
    if (parens) out += ')';
  };
  switch (n.kind) {
    case NodeKind::Constant:
      if (std::signbit(n.value)) {
        out += "(-";
        out += format_number(-n.value);
        out += ')';
      } else {
        out += format_number(n.value);
      }
      return;
    case NodeKind::Variable:
      out += n.name;
      return;
    case NodeKind::Neg:
      out += '-';
      // parenthesize literals so that they do not fold into the constant
      child(n.lhs, precedence(n.lhs) < 3 || n.lhs.kind() == NodeKind::Constant);
      return;
    case NodeKind::Pow:
      child(n.lhs, precedence(n.lhs) < 5);
      out += '^';
      out += std::to_string(n.exponent);
      return;
    case NodeKind::Apply:
      out += function_name(n.fn);
      out += '(';
      print_into(n.lhs, out);
      out += ')';
      return;
    default: {
      int p = precedence(e);
      child(n.lhs, precedence(n.lhs) < p);
      switch (n.kind) {
        case NodeKind::Add: out += '+'; break;
        case NodeKind::Sub: out += '-'; break;
        case NodeKind::Mul: out += '*'; break;
        default: out += '/'; break;
      }
      child(n.rhs, precedence(n.rhs) <= p);
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation

double apply_function(Function f, double x, const Node& source) {
  switch (f) {
    case Function::Sin: return std::sin(x);
    case Function::Cos: return std::cos(x);
    case Function::Tan: return std::tan(x);
    case Function::Exp: return std::exp(x);
    case Function::Log:
      if (!(x > 0.0)) throw EvalError("log of non-positive value", print(Expr(std::make_shared<const Node>(source))));
      return std::log(x);
    case Function::Sqrt:
      if (x < 0.0) throw EvalError("sqrt of negative value", print(Expr(std::make_shared<const Node>(source))));
      return std::sqrt(x);
    case Function::Sinh: return std::sinh(x);
    case Function::Cosh: return std::cosh(x);
  }
  return 0.0;
}

[[noreturn]] void domain_error(const char* what, const Node& source) {
  throw EvalError(what, print(Expr(std::make_shared<const Node>(source))));
}

double integer_power(double base, int exponent, const Node& source) {
  if (base == 0.0 && exponent < 0) domain_error("division by zero", source);
  return std::pow(base, exponent);
}

double combine(NodeKind kind, double a, double b, const Node& source) {
  switch (kind) {
    case NodeKind::Add: return a + b;
    case NodeKind::Sub: return a - b;
    case NodeKind::Mul: return a * b;
    default:
      if (b == 0.0) domain_error("division by zero", source);
      return a / b;
  }
}

double checked(double v, const Node& source) {
  if (!std::isfinite(v)) domain_error("non-finite result", source);
  return v;
}

double eval_tree(const Expr& e, const std::map<std::string, double, std::less<>>& bindings) {
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::Constant:
      return n.value;
    case NodeKind::Variable: {
      auto it = bindings.find(n.name);
      if (it == bindings.end()) throw EvalError("unbound variable", n.name);
      return it->second;
    }
    case NodeKind::Neg:
      return -eval_tree(n.lhs, bindings);
    case NodeKind::Pow:
      return checked(integer_power(eval_tree(n.lhs, bindings), n.exponent, n), n);
    case NodeKind::Apply:
      return checked(apply_function(n.fn, eval_tree(n.lhs, bindings), n), n);
    default:
      return checked(combine(n.kind, eval_tree(n.lhs, bindings), eval_tree(n.rhs, bindings), n), n);
  }
}

void collect_variables(const Expr& e, std::set<std::string>& out) {
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::Constant:
      return;
    case NodeKind::Variable:
      out.insert(n.name);
      return;
    case NodeKind::Neg:
    case NodeKind::Pow:
    case NodeKind::Apply:
      collect_variables(n.lhs, out);
      return;
    default:
      collect_variables(n.lhs, out);
      collect_variables(n.rhs, out);
  }
}

}  // namespace

std::string_view function_name(Function f) {
  for (const auto& [n, fn] : kFunctions)
    if (fn == f) return n;
  return "?";
}

// ---------------------------------------------------------------------------
// Expr

Expr::Expr() {
  static const std::shared_ptr<const Node> zero = std::make_shared<const Node>();
  node_ = zero;
}

Expr Expr::constant(double value) {
  Node n;
  n.kind = NodeKind::Constant;
  n.value = value;
  return make_node(std::move(n));
}

Expr Expr::variable(std::string name) {
  Node n;
  n.kind = NodeKind::Variable;
  n.name = std::move(name);
  return make_node(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }

bool Expr::is_constant() const { return node_->kind == NodeKind::Constant; }

bool Expr::is_constant(double value) const {
  return node_->kind == NodeKind::Constant && node_->value == value;
}

bool Expr::depends_on(std::string_view var) const {
  const Node& n = *node_;
  switch (n.kind) {
    case NodeKind::Constant:
      return false;
    case NodeKind::Variable:
      return n.name == var;
    case NodeKind::Neg:
    case NodeKind::Pow:
    case NodeKind::Apply:
      return n.lhs.depends_on(var);
    default:
      return n.lhs.depends_on(var) || n.rhs.depends_on(var);
  }
}

Expr make_neg(Expr a) {
  Node n;
  n.kind = NodeKind::Neg;
  n.lhs = std::move(a);
  return make_node(std::move(n));
}

Expr make_binary(NodeKind kind, Expr a, Expr b) {
  Node n;
  n.kind = kind;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return make_node(std::move(n));
}

Expr make_pow(Expr base, int exponent) {
  Node n;
  n.kind = NodeKind::Pow;
  n.lhs = std::move(base);
  n.exponent = exponent;
  return make_node(std::move(n));
}

Expr make_apply(Function f, Expr arg) {
  Node n;
  n.kind = NodeKind::Apply;
  n.fn = f;
  n.lhs = std::move(arg);
  return make_node(std::move(n));
}

namespace {

bool foldable(double v) { return std::isfinite(v); }

}  // namespace

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.node().value);
  if (a.kind() == NodeKind::Neg) return a.node().lhs;
  return make_neg(a);
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  if (a.is_constant() && b.is_constant() && foldable(a.node().value + b.node().value))
    return Expr::constant(a.node().value + b.node().value);
  if (b.kind() == NodeKind::Neg) return make_binary(NodeKind::Sub, a, b.node().lhs);
  return make_binary(NodeKind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  if (a.is_constant() && b.is_constant() && foldable(a.node().value - b.node().value))
    return Expr::constant(a.node().value - b.node().value);
  if (b.kind() == NodeKind::Neg) return make_binary(NodeKind::Add, a, b.node().lhs);
  return make_binary(NodeKind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  if (a.is_constant() && b.is_constant() && foldable(a.node().value * b.node().value))
    return Expr::constant(a.node().value * b.node().value);
  return make_binary(NodeKind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  if (a.is_constant() && b.is_constant() && b.node().value != 0.0 &&
      foldable(a.node().value / b.node().value))
    return Expr::constant(a.node().value / b.node().value);
  return make_binary(NodeKind::Div, a, b);
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr::constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant()) {
    double v = std::pow(base.node().value, exponent);
    if (foldable(v) && !(base.node().value == 0.0 && exponent < 0)) return Expr::constant(v);
  }
  return make_pow(base, exponent);
}

Expr apply(Function f, const Expr& arg) { return make_apply(f, arg); }

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const Expr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

Expr diff(const Expr& e, std::string_view var) {
  if (!e.depends_on(var)) return Expr::constant(0.0);
  const Node& n = e.node();
  switch (n.kind) {
    case NodeKind::Constant:
      return Expr::constant(0.0);
    case NodeKind::Variable:
      return Expr::constant(n.name == var ? 1.0 : 0.0);
    case NodeKind::Neg:
      return -diff(n.lhs, var);
    case NodeKind::Add:
      return diff(n.lhs, var) + diff(n.rhs, var);
    case NodeKind::Sub:
      return diff(n.lhs, var) - diff(n.rhs, var);
    case NodeKind::Mul:
      return diff(n.lhs, var) * n.rhs + n.lhs * diff(n.rhs, var);
    case NodeKind::Div:
      return (diff(n.lhs, var) * n.rhs - n.lhs * diff(n.rhs, var)) / pow(n.rhs, 2);
    case NodeKind::Pow:
      return Expr::constant(n.exponent) * pow(n.lhs, n.exponent - 1) * diff(n.lhs, var);
    case NodeKind::Apply: {
      const Expr& u = n.lhs;
      Expr du = diff(u, var);
      switch (n.fn) {
        case Function::Sin: return apply(Function::Cos, u) * du;
        case Function::Cos: return -(apply(Function::Sin, u) * du);
        case Function::Tan: return du / pow(apply(Function::Cos, u), 2);
        case Function::Exp: return e * du;
        case Function::Log: return du / u;
        case Function::Sqrt: return du / (Expr::constant(2.0) * e);
        case Function::Sinh: return apply(Function::Cosh, u) * du;
        case Function::Cosh: return apply(Function::Sinh, u) * du;
      }
    }
  }
  return Expr::constant(0.0);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  const Node& x = a.node();
  const Node& y = b.node();
  if (&x == &y) return true;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case NodeKind::Constant:
      return x.value == y.value && std::signbit(x.value) == std::signbit(y.value);
    case NodeKind::Variable:
      return x.name == y.name;
    case NodeKind::Neg:
      return structurally_equal(x.lhs, y.lhs);
    case NodeKind::Pow:
      return x.exponent == y.exponent && structurally_equal(x.lhs, y.lhs);
    case NodeKind::Apply:
      return x.fn == y.fn && structurally_equal(x.lhs, y.lhs);
    default:
      return structurally_equal(x.lhs, y.lhs) && structurally_equal(x.rhs, y.rhs);
  }
}

std::vector<std::string> variables(const Expr& e) {
  std::set<std::string> out;
  collect_variables(e, out);
  return {out.begin(), out.end()};
}

double eval(const Expr& e, const std::map<std::string, double, std::less<>>& bindings) {
  return eval_tree(e, bindings);
}

// ---------------------------------------------------------------------------
// Program

namespace {

struct Compiler {
  std::span<const std::string> coords;
  std::size_t depth = 0;
  std::size_t max_depth = 0;
  bool constant = true;

  template <typename Emit>
  void run(const Expr& e, Emit&& emit) {
    const Node& n = e.node();
    switch (n.kind) {
      case NodeKind::Constant:
        emit({n.kind, Function::Sin, 0, n.value, &n});
        push();
        return;
      case NodeKind::Variable: {
        int slot = -1;
        for (std::size_t i = 0; i < coords.size(); ++i)
          if (coords[i] == n.name) slot = static_cast<int>(i);
        if (slot < 0) throw EvalError("unbound variable", n.name);
        constant = false;
        emit({n.kind, Function::Sin, slot, 0.0, &n});
        push();
        return;
      }
      case NodeKind::Neg:
      case NodeKind::Pow:
      case NodeKind::Apply:
        run(n.lhs, emit);
        emit({n.kind, n.fn, n.exponent, 0.0, &n});
        return;
      default:
        run(n.lhs, emit);
        run(n.rhs, emit);
        emit({n.kind, Function::Sin, 0, 0.0, &n});
        --depth;
    }
  }

  void push() {
    ++depth;
    if (depth > max_depth) max_depth = depth;
  }
};

}  // namespace

Program::Program(const Expr& e, std::span<const std::string> coords) : root_(e) {
  Compiler c{coords};
  c.run(e, [this](Instr i) { code_.push_back(i); });
  constant_ = c.constant;
  max_depth_ = c.max_depth;
}

double Program::operator()(std::span<const double> point) const {
  constexpr std::size_t kInline = 32;
  std::array<double, kInline> small{};
  std::vector<double> large;
  double* stack = small.data();
  if (max_depth_ > kInline) {
    large.resize(max_depth_);
    stack = large.data();
  }
  std::size_t top = 0;
  for (const Instr& in : code_) {
    switch (in.kind) {
      case NodeKind::Constant:
        stack[top++] = in.value;
        break;
      case NodeKind::Variable:
        stack[top++] = point[static_cast<std::size_t>(in.arg)];
        break;
      case NodeKind::Neg:
        stack[top - 1] = -stack[top - 1];
        break;
      case NodeKind::Pow:
        stack[top - 1] = checked(integer_power(stack[top - 1], in.arg, *in.source), *in.source);
        break;
      case NodeKind::Apply:
        stack[top - 1] = checked(apply_function(in.fn, stack[top - 1], *in.source), *in.source);
        break;
      default:
        --top;
        stack[top - 1] = checked(combine(in.kind, stack[top - 1], stack[top], *in.source), *in.source);
    }
  }
  return top == 0 ? 0.0 : stack[0];
}

}  // namespace pssc
