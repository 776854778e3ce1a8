#pragma once

// Arithmetic expressions over named real variables: literals, variables,
// negation, + - * / ^ and the functions sin, cos, exp, log.
//
// Precedence, tightest first: ^ (right-assoc), unary -, * / (left), + - (left).

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>

namespace lensdyn::expr {

enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class Fn { Sin, Cos, Exp, Log };

struct Node;

// Immutable expression tree; copies share structure.
class Expr {
 public:
  static Expr literal(double value);
  static Expr variable(std::string name);
  static Expr negate(Expr arg);
  static Expr binary(BinOp op, Expr lhs, Expr rhs);
  static Expr call(Fn fn, Expr arg);

  const Node& node() const { return *node_; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Literal {
  double value;
};
struct Variable {
  std::string name;
};
struct Negate {
  Expr arg;
};
struct Binary {
  BinOp op;
  Expr lhs;
  Expr rhs;
};
struct Call {
  Fn fn;
  Expr arg;
};

struct Node {
  std::variant<Literal, Variable, Negate, Binary, Call> v;
};

using Env = std::map<std::string, double, std::less<>>;

Expr parse(std::string_view text);
double eval(const Expr& e, const Env& env);
std::set<std::string> free_vars(const Expr& e);
// Simultaneous replacement of variables by expressions.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);
// Canonical form with minimal parentheses; parse(to_string(e)) == e.
std::string to_string(const Expr& e);

bool is_identifier(std::string_view s);

}  // namespace lensdyn::expr
