#include "slsolver/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace sl {

namespace {

struct FnEntry {
  const char* name;
  double (*fn)(double);
};

constexpr std::array<FnEntry, 10> kFunctions{{
    {"sin", std::sin},
    {"cos", std::cos},
    {"tan", std::tan},
    {"sinh", std::sinh},
    {"cosh", std::cosh},
    {"tanh", std::tanh},
    {"exp", std::exp},
    {"log", std::log},
    {"sqrt", std::sqrt},
    {"abs", std::fabs},
}};

int function_index(const std::string& name) {
  for (std::size_t i = 0; i < kFunctions.size(); ++i)
    if (name == kFunctions[i].name) return static_cast<int>(i);
  return -1;
}

}  // namespace

class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : text_(text) {}

  Expr run() {
    Expr e;
    nodes_ = &e.nodes_;
    e.root_ = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  std::vector<Expr::Node>* nodes_ = nullptr;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  int add(Expr::Node n) {
    nodes_->push_back(n);
    return static_cast<int>(nodes_->size()) - 1;
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (consume('+'))
        lhs = add({Expr::Op::add, 0.0, -1, lhs, parse_term()});
      else if (consume('-'))
        lhs = add({Expr::Op::sub, 0.0, -1, lhs, parse_term()});
      else
        return lhs;
    }
  }

  int parse_term() {
    int lhs = parse_factor();
    for (;;) {
      if (consume('*'))
        lhs = add({Expr::Op::mul, 0.0, -1, lhs, parse_factor()});
      else if (consume('/'))
        lhs = add({Expr::Op::div, 0.0, -1, lhs, parse_factor()});
      else
        return lhs;
    }
  }

  // Unary minus binds looser than "^": -2^2 parses as -(2^2).
  int parse_factor() {
    if (consume('-')) {
      int base = parse_atom();
      if (consume('^')) base = add({Expr::Op::pow, 0.0, -1, base, parse_factor()});
      return add({Expr::Op::neg, 0.0, -1, base, -1});
    }
    int base = parse_atom();
    if (consume('^')) return add({Expr::Op::pow, 0.0, -1, base, parse_factor()});
    return base;
  }

  int parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      int inner = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
    fail(std::string("unexpected character '") + c + "'");
  }

  int parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // "e" was the constant, not an exponent
      }
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '.'))
      fail("malformed number");
    return add({Expr::Op::number, std::stod(text_.substr(start, pos_ - start)), -1, -1, -1});
  }

  int parse_name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == "x") return add({Expr::Op::var_x, 0.0, -1, -1, -1});
    if (name == "pi") return add({Expr::Op::number, std::numbers::pi, -2, -1, -1});
    if (name == "e") return add({Expr::Op::number, std::numbers::e, -3, -1, -1});
    int fn = function_index(name);
    if (fn < 0) {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    if (!consume('(')) fail("function '" + name + "' requires one parenthesized argument");
    int arg = parse_expr();
    if (!consume(')')) fail("expected ')' closing argument of '" + name + "'");
    return add({Expr::Op::call, 0.0, fn, arg, -1});
  }
};

Expr Expr::parse(const std::string& text) { return ExprParser(text).run(); }

double Expr::eval(int id, double x) const {
  const Node& n = nodes_[static_cast<std::size_t>(id)];
  switch (n.op) {
    case Op::number: return n.value;
    case Op::var_x: return x;
    case Op::add: return eval(n.a, x) + eval(n.b, x);
    case Op::sub: return eval(n.a, x) - eval(n.b, x);
    case Op::mul: return eval(n.a, x) * eval(n.b, x);
    case Op::div: return eval(n.a, x) / eval(n.b, x);
    case Op::pow: return std::pow(eval(n.a, x), eval(n.b, x));
    case Op::neg: return -eval(n.a, x);
    case Op::call: return kFunctions[static_cast<std::size_t>(n.fn)].fn(eval(n.a, x));
  }
  return 0.0;
}

double Expr::operator()(double x) const { return eval(root_, x); }

void Expr::print(int id, std::string& out) const {
  const Node& n = nodes_[static_cast<std::size_t>(id)];
  switch (n.op) {
    case Op::number: {
      if (n.fn == -2) {
        out += "pi";
      } else if (n.fn == -3) {
        out += "e";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", n.value);
        out += buf;
      }
      return;
    }
    case Op::var_x: out += 'x'; return;
    case Op::neg:
      out += "(-";
      print(n.a, out);
      out += ')';
      return;
    case Op::call:
      out += kFunctions[static_cast<std::size_t>(n.fn)].name;
      out += '(';
      print(n.a, out);
      out += ')';
      return;
    default: break;
  }
  const char op_char = n.op == Op::add   ? '+'
                       : n.op == Op::sub ? '-'
                       : n.op == Op::mul ? '*'
                       : n.op == Op::div ? '/'
                                         : '^';
  out += '(';
  print(n.a, out);
  out += op_char;
  print(n.b, out);
  out += ')';
}

std::string Expr::str() const {
  std::string out;
  print(root_, out);
  return out;
}

std::function<double(double)> parse_potential(const std::string& expr) {
  auto parsed = std::make_shared<Expr>(Expr::parse(expr));
  return [parsed](double x) { return (*parsed)(x); };
}

}  // namespace sl
