#ifndef KHALL_EXPR_HPP
#define KHALL_EXPR_HPP

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "khall/distcalc.hpp"
#include "khall/lambda.hpp"

namespace khall {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Integer literals are non-negative; a leading minus is a Neg node.
struct Expr {
  enum class Kind { Integer, Name, KLiteral, Neg, Add, Sub, Mul, Div, Pow, Delta, Wedge, Sym, Expand };

  Kind kind = Kind::Integer;
  Integer number;             // Integer
  std::string name;           // Name; the variable of Expand
  std::string at;             // Expand: "inf", "zero" or "both"
  int exponent = 0;           // Pow
  std::vector<int> signs;     // KLiteral: +1 / -1 per entry
  std::vector<ExprPtr> args;  // operands; KLiteral entries

  static ExprPtr integer(const Integer& v);
  static ExprPtr named(std::string n);
  static ExprPtr unary(Kind k, ExprPtr a);
  static ExprPtr binary(Kind k, ExprPtr a, ExprPtr b);
  static ExprPtr power(ExprPtr base, int exponent);
  static ExprPtr klass(std::vector<int> signs, std::vector<ExprPtr> entries);
  static ExprPtr expand(ExprPtr f, std::string var, std::string at);
};

bool operator==(const Expr& a, const Expr& b);

// Grammar: infix + - * / and ^ with an integer exponent, precedence
// ^ > unary - > * / > + -, left associative. Atoms: integers, names,
// (expr), delta(m), wedge(k), sym(k), K[+u,-1,...], expand(f, var, inf|zero|both).
// Throws SyntaxError with 1-based line and column.
ExprPtr parse_expr(std::string_view text);

// Minimal parentheses; parse_expr(print_expr(e)) == e.
std::string print_expr(const Expr& e);

// z, w, x, y and z1, z2, ... are formal variables; other names are ring
// generators.
bool is_formal_variable(std::string_view name);

// The given ring with every generator name used by e and missing from the
// ring adjoined as a free unit.
RingPtr ring_for(const Expr& e, const RingPtr& base);

// K[...] * scale, the argument of wedge and sym.
struct ScaledClass {
  KClass k;
  ScaledMonomial scale;
};

// A preset name ("Z", "free", "P2", "P1xP1") or an inline presentation
// "Z[t]" / "Z[a,b]/((a-1)^2, (b-1)^2)": generators are invertible and each
// relation is a monic polynomial in a single generator.
RingPtr parse_ring(std::string_view text);

using Value = std::variant<RatFun, FormalDist, KClass, ScaledClass>;

// `order` is the truncation used by expand markers.
Value lower(const Expr& e, const RingPtr& ring, int order);
std::string value_to_string(const Value& v);
std::string value_kind(const Value& v);

}  // namespace khall

#endif
