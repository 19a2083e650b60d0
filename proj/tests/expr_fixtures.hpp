#pragma once

// Shared by the expression unit tests and the acceptance binary.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pssc/expr.hpp"

namespace pssc::testing {

// Random expressions from the grammar. Arguments of log and sqrt are kept
// positive and denominators away from zero by construction, so every draw is
// defined on the sampling box [0.5, 1.5]^2.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  Expr draw(int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 11);
    switch (pick(rng_)) {
      case 0: return Expr::constant(small_constant());
      case 1: return Expr::variable(coin() ? "x" : "y");
      case 2: return make_binary(NodeKind::Add, draw(depth - 1), draw(depth - 1));
      case 3: return make_binary(NodeKind::Sub, draw(depth - 1), draw(depth - 1));
      case 4: return make_binary(NodeKind::Mul, draw(depth - 1), draw(depth - 1));
      case 5: return make_binary(NodeKind::Div, draw(depth - 1), positive(depth - 1));
      case 6:
        if (std::uniform_int_distribution<int>(0, 5)(rng_) == 0) return make_pow(positive(depth - 1), -1);
        return make_pow(draw(depth - 1), 2);
      case 7: return make_neg(draw(depth - 1));
      case 8: return make_apply(coin() ? Function::Sin : Function::Cos, draw(depth - 1));
      case 9: return make_apply(coin() ? Function::Log : Function::Sqrt, positive(depth - 1));
      case 10: {
        // exp/sinh/cosh of a bounded argument
        Function f = std::array{Function::Exp, Function::Sinh, Function::Cosh}[std::uniform_int_distribution<int>(0, 2)(rng_)];
        return make_apply(f, make_apply(Function::Sin, draw(depth - 1)));
      }
      default:
        return make_apply(Function::Tan, make_binary(NodeKind::Mul, Expr::constant(0.5),
                                                     make_apply(Function::Sin, draw(depth - 1))));
    }
  }

 private:
  // 1.5 + sin(e)^2, or a bare variable (the box keeps it above 0.5).
  Expr positive(int depth) {
    if (depth <= 0 || coin()) return Expr::variable(coin() ? "x" : "y");
    return make_binary(NodeKind::Add, Expr::constant(1.5), make_pow(make_apply(Function::Sin, draw(depth - 1)), 2));
  }
  double small_constant() { return std::round(std::uniform_real_distribution<double>(-4, 4)(rng_) * 4) / 4; }
  bool coin() { return std::uniform_int_distribution<int>(0, 1)(rng_) == 1; }

  std::mt19937_64 rng_;
};


inline const std::vector<std::string>& round_trip_corpus() {
  static const std::vector<std::string> corpus = {
      "1", "0", "2.5", "1e-3", "x", "theta", "-x", "--x", "x+y", "x-y", "x*y", "x/y", "x^2", "x^-2", "-x^2",
      "(-x)^2", "x-(y-z)", "x-y-z", "x/(y/z)", "x/y/z", "x*(y+z)", "(x+y)*z", "x*y*z", "x*(y*z)",
      "(x^2)^3", "sin(x)", "cos(x)^2", "tan(x/2)", "exp(-x)", "log(1+x^2)", "sqrt(x*y)", "sinh(x)-cosh(y)",
      "sin(theta)^2", "sin(chi)^2*sin(theta)^2", "1/(sin(chi)*sin(theta))", "-sin(theta)", "1/sin(theta)",
      "-(x+y)", "-(x*y)", "(-x)*y", "x*-y", "2*-3", "-(-(x))", "((x))", "x^0", "x^1", "(x+1)^3 - (x-1)^3",
      "exp(sin(x))*log(2+cos(y))", "sqrt(1 - 0.5*sin(x)^2)", "cosh(x)^2 - sinh(x)^2", "a*b+c", "a+b*c",
      "a*(b+c)", "(a+b)/(c-d)", "1/4", "0.25*x", "x/4", "3.141592653589793*r^2", "-1e+20", "1.5e-300*x",
      "x - -y", "x + -y", "-x*-y", "(x-y)^-1", "sin(cos(tan(x)))", "exp(x)^-3"};
  return corpus;
}

/// Worst relative error |exact - fd| / (1 + |exact|) of symbolic derivatives
/// against central differences (h = 1e-6) over `count` seeded draws on
/// [0.5, 1.5]^2. worst_index receives the offending draw.
inline double worst_derivative_error(int count, int& worst_index) {
  ExprGen gen(2024);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  const double h = 1e-6;
  double worst = 0.0;
  worst_index = -1;
  for (int k = 0; k < count; ++k) {
    Expr e = gen.draw(4);
    const char* v = (k % 2) ? "x" : "y";
    double x = u(rng), y = u(rng);
    auto f = [&](double dx, double dy) { return eval(e, {{"x", x + dx}, {"y", y + dy}}); };
    double exact = eval(diff(e, v), {{"x", x}, {"y", y}});
    double fd = v[0] == 'x' ? (f(h, 0) - f(-h, 0)) / (2 * h) : (f(0, h) - f(0, -h)) / (2 * h);
    double err = std::abs(exact - fd) / (1.0 + std::abs(exact));
    if (err > worst) {
      worst = err;
      worst_index = k;
    }
  }
  return worst;
}

}  // namespace pssc::testing
