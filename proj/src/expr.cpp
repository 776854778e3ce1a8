#include "lensdyn/expr.hpp"

#include <charconv>
#include <cmath>

#include "lensdyn/error.hpp"

namespace lensdyn::expr {

Expr Expr::literal(double value) {
  return Expr(std::make_shared<const Node>(Node{Literal{value}}));
}
Expr Expr::variable(std::string name) {
  return Expr(std::make_shared<const Node>(Node{Variable{std::move(name)}}));
}
Expr Expr::negate(Expr arg) {
  return Expr(std::make_shared<const Node>(Node{Negate{std::move(arg)}}));
}
Expr Expr::binary(BinOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}}));
}
Expr Expr::call(Fn fn, Expr arg) {
  return Expr(std::make_shared<const Node>(Node{Call{fn, std::move(arg)}}));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = a.node().v;
  const auto& y = b.node().v;
  if (x.index() != y.index()) return false;
  if (auto p = std::get_if<Literal>(&x)) return p->value == std::get<Literal>(y).value;
  if (auto p = std::get_if<Variable>(&x)) return p->name == std::get<Variable>(y).name;
  if (auto p = std::get_if<Negate>(&x)) return p->arg == std::get<Negate>(y).arg;
  if (auto p = std::get_if<Binary>(&x)) {
    const auto& q = std::get<Binary>(y);
    return p->op == q.op && p->lhs == q.lhs && p->rhs == q.rhs;
  }
  const auto& p = std::get<Call>(x);
  const auto& q = std::get<Call>(y);
  return p.fn == q.fn && p.arg == q.arg;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!alpha(s[0])) return false;
  for (char c : s)
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  return true;
}

namespace {

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr parse_all() {
    auto e = parse_sum();
    skip_ws();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
                                s_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    auto lhs = parse_product();
    while (true) {
      if (accept('+')) lhs = Expr::binary(BinOp::Add, lhs, parse_product());
      else if (accept('-')) lhs = Expr::binary(BinOp::Sub, lhs, parse_product());
      else return lhs;
    }
  }

  Expr parse_product() {
    auto lhs = parse_unary();
    while (true) {
      if (accept('*')) lhs = Expr::binary(BinOp::Mul, lhs, parse_unary());
      else if (accept('/')) lhs = Expr::binary(BinOp::Div, lhs, parse_unary());
      else return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::negate(parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    auto base = parse_primary();
    if (accept('^')) return Expr::binary(BinOp::Pow, base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (accept('(')) {
      auto e = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') return parse_name();
    fail(std::string("unexpected '") + c + "'");
  }

  Expr parse_number() {
    const auto start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_, ++n;
      return n;
    };
    auto n = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail("malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    double value = 0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::literal(value);
  }

  Expr parse_name() {
    const auto start = pos_;
    while (pos_ < s_.size() && ((s_[pos_] >= 'a' && s_[pos_] <= 'z') ||
                                (s_[pos_] >= 'A' && s_[pos_] <= 'Z') ||
                                (s_[pos_] >= '0' && s_[pos_] <= '9') || s_[pos_] == '_'))
      ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (!accept('(')) return Expr::variable(std::move(name));
    Fn fn;
    if (name == "sin") fn = Fn::Sin;
    else if (name == "cos") fn = Fn::Cos;
    else if (name == "exp") fn = Fn::Exp;
    else if (name == "log") fn = Fn::Log;
    else {
      pos_ = start;
      fail("unknown function '" + name + "'");
    }
    auto arg = parse_sum();
    if (!accept(')')) fail("expected ')'");
    return Expr::call(fn, std::move(arg));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  const auto& v = e.node().v;
  if (auto b = std::get_if<Binary>(&v)) {
    switch (b->op) {
      case BinOp::Add:
      case BinOp::Sub: return 1;
      case BinOp::Mul:
      case BinOp::Div: return 2;
      case BinOp::Pow: return 4;
    }
  }
  if (std::holds_alternative<Negate>(v)) return 3;
  return 5;
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool parens, std::string& out) {
  if (parens) out += '(';
  print(e, out);
  if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
  const auto& v = e.node().v;
  if (auto p = std::get_if<Literal>(&v)) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, p->value);
    out.append(buf, res.ptr);
  } else if (auto p = std::get_if<Variable>(&v)) {
    out += p->name;
  } else if (auto p = std::get_if<Negate>(&v)) {
    out += '-';
    print_wrapped(p->arg, precedence(p->arg) < 3, out);
  } else if (auto p = std::get_if<Binary>(&v)) {
    const int prec = precedence(e);
    if (p->op == BinOp::Pow) {
      print_wrapped(p->lhs, precedence(p->lhs) <= 4, out);
      out += '^';
      print_wrapped(p->rhs, precedence(p->rhs) < 3, out);
      return;
    }
    print_wrapped(p->lhs, precedence(p->lhs) < prec, out);
    switch (p->op) {
      case BinOp::Add: out += " + "; break;
      case BinOp::Sub: out += " - "; break;
      case BinOp::Mul: out += '*'; break;
      case BinOp::Div: out += '/'; break;
      case BinOp::Pow: break;
    }
    print_wrapped(p->rhs, precedence(p->rhs) <= prec, out);
  } else {
    const auto& c = std::get<Call>(v);
    out += fn_name(c.fn);
    out += '(';
    print(c.arg, out);
    out += ')';
  }
}

void collect(const Expr& e, std::set<std::string>& out) {
  const auto& v = e.node().v;
  if (auto p = std::get_if<Variable>(&v)) out.insert(p->name);
  else if (auto p = std::get_if<Negate>(&v)) collect(p->arg, out);
  else if (auto p = std::get_if<Binary>(&v)) {
    collect(p->lhs, out);
    collect(p->rhs, out);
  } else if (auto p = std::get_if<Call>(&v)) collect(p->arg, out);
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

double eval(const Expr& e, const Env& env) {
  const auto& v = e.node().v;
  if (auto p = std::get_if<Literal>(&v)) return p->value;
  if (auto p = std::get_if<Variable>(&v)) {
    auto it = env.find(p->name);
    if (it == env.end()) throw EvalError("unbound variable '" + p->name + "'");
    return it->second;
  }
  if (auto p = std::get_if<Negate>(&v)) return -eval(p->arg, env);
  if (auto p = std::get_if<Binary>(&v)) {
    const double a = eval(p->lhs, env);
    const double b = eval(p->rhs, env);
    switch (p->op) {
      case BinOp::Add: return a + b;
      case BinOp::Sub: return a - b;
      case BinOp::Mul: return a * b;
      case BinOp::Div:
        if (b == 0.0) throw EvalError("division by zero");
        return a / b;
      case BinOp::Pow: {
        const double r = std::pow(a, b);
        if (std::isnan(r) && !std::isnan(a) && !std::isnan(b))
          throw EvalError("power of negative base with non-integer exponent");
        return r;
      }
    }
  }
  const auto& c = std::get<Call>(v);
  const double x = eval(c.arg, env);
  switch (c.fn) {
    case Fn::Sin: return std::sin(x);
    case Fn::Cos: return std::cos(x);
    case Fn::Exp: return std::exp(x);
    case Fn::Log:
      if (!(x > 0.0)) throw EvalError("log of non-positive value");
      return std::log(x);
  }
  return 0.0;
}

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  if (bindings.empty()) return e;
  const auto& v = e.node().v;
  if (auto p = std::get_if<Variable>(&v)) {
    auto it = bindings.find(p->name);
    return it == bindings.end() ? e : it->second;
  }
  if (auto p = std::get_if<Negate>(&v)) return Expr::negate(substitute(p->arg, bindings));
  if (auto p = std::get_if<Binary>(&v))
    return Expr::binary(p->op, substitute(p->lhs, bindings), substitute(p->rhs, bindings));
  if (auto p = std::get_if<Call>(&v)) return Expr::call(p->fn, substitute(p->arg, bindings));
  return e;
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

}  // namespace lensdyn::expr
