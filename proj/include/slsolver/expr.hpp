#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace sl {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

/// Arithmetic expression in one variable x.
///
/// Grammar: expr := term (("+"|"-") term)*; term := factor (("*"|"/") factor)*;
/// factor := unary ("^" factor)?; unary := "-"? atom;
/// atom := number | "x" | "pi" | "e" | func "(" expr ")" | "(" expr ")"
/// with func one of sin cos tan sinh cosh tanh exp log sqrt abs.
/// "^" is right-associative; unary minus binds looser than "^".
class Expr {
 public:
  static Expr parse(const std::string& text);

  double operator()(double x) const;

  /// Fully parenthesized form; reparsing yields an identical tree.
  std::string str() const;

 private:
  enum class Op : unsigned char { number, var_x, add, sub, mul, div, pow, neg, call };
  struct Node {
    Op op;
    double value = 0.0;
    int fn = -1;  // call index; for number: -1 plain, -2 "pi", -3 "e"
    int a = -1, b = -1;
  };
  std::vector<Node> nodes_;
  int root_ = -1;

  double eval(int id, double x) const;
  void print(int id, std::string& out) const;
  friend class ExprParser;
};

/// Parses a potential expression into an evaluable coefficient function.
std::function<double(double)> parse_potential(const std::string& expr);

}  // namespace sl
