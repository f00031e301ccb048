#include "khall/expr.hpp"

#include <cctype>
#include <map>
#include <set>

#include "khall/error.hpp"

namespace khall {

ExprPtr Expr::integer(const Integer& v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Integer;
  e->number = v;
  return e;
}

ExprPtr Expr::named(std::string n) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Name;
  e->name = std::move(n);
  return e;
}

ExprPtr Expr::unary(Kind k, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->args = {std::move(a)};
  return e;
}

ExprPtr Expr::binary(Kind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr Expr::power(ExprPtr base, int exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Pow;
  e->exponent = exponent;
  e->args = {std::move(base)};
  return e;
}

ExprPtr Expr::klass(std::vector<int> signs, std::vector<ExprPtr> entries) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::KLiteral;
  e->signs = std::move(signs);
  e->args = std::move(entries);
  return e;
}

ExprPtr Expr::expand(ExprPtr f, std::string var, std::string at) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Expand;
  e->name = std::move(var);
  e->at = std::move(at);
  e->args = {std::move(f)};
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.number != b.number || a.name != b.name || a.at != b.at || a.exponent != b.exponent ||
      a.signs != b.signs || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!(*a.args[i] == *b.args[i])) return false;
  return true;
}

// ---- parsing

namespace {

struct Token {
  enum Type { Number, Ident, Punct, End } type = End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    std::size_t j = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.type = Token::Number;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.type = Token::Ident;
    } else if (std::string_view("+-*/^()[],").find(c) != std::string_view::npos) {
      j = i + 1;
      t.type = Token::Punct;
    } else {
      throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
    }
    t.text = std::string(s.substr(i, j - i));
    out.push_back(t);
    advance(j - i);
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

bool is_keyword(const std::string& s) { return s == "delta" || s == "wedge" || s == "sym" || s == "expand"; }

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ExprPtr parse_all() {
    ExprPtr e = expr();
    if (peek().type != Token::End) fail(peek(), "unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_punct(const char* p) const { return peek().type == Token::Punct && peek().text == p; }
  [[noreturn]] static void fail(const Token& t, const std::string& what) { throw SyntaxError(t.line, t.column, what); }

  void expect(const char* p) {
    if (!at_punct(p)) {
      const Token& t = peek();
      fail(t, std::string("expected '") + p + "'" + (t.type == Token::End ? " before end of input" : ", got '" + t.text + "'"));
    }
    ++pos_;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (at_punct("+") || at_punct("-")) {
      const auto k = peek().text == "+" ? Expr::Kind::Add : Expr::Kind::Sub;
      ++pos_;
      e = Expr::binary(k, e, term());
    }
    return e;
  }

  ExprPtr term() {
    ExprPtr e = unary();
    while (at_punct("*") || at_punct("/")) {
      const auto k = peek().text == "*" ? Expr::Kind::Mul : Expr::Kind::Div;
      ++pos_;
      e = Expr::binary(k, e, unary());
    }
    return e;
  }

  ExprPtr unary() {
    if (at_punct("-")) {
      ++pos_;
      return Expr::unary(Expr::Kind::Neg, unary());
    }
    ExprPtr base = primary();
    if (at_punct("^")) {
      ++pos_;
      return Expr::power(base, exponent());
    }
    return base;
  }

  int exponent() {
    const bool paren = at_punct("(");
    if (paren) ++pos_;
    int sign = 1;
    if (at_punct("-")) {
      sign = -1;
      ++pos_;
    }
    const Token& t = peek();
    if (t.type != Token::Number) fail(t, "exponent must be an integer");
    if (t.text.size() > 9) fail(t, "exponent " + t.text + " out of range");
    const int v = sign * std::stoi(t.text);
    ++pos_;
    if (paren) expect(")");
    return v;
  }

  ExprPtr primary() {
    const Token t = peek();
    switch (t.type) {
      case Token::Number:
        ++pos_;
        return Expr::integer(Integer(t.text));
      case Token::Ident:
        if (t.text == "K" && peek(1).type == Token::Punct && peek(1).text == "[") return klass();
        if (is_keyword(t.text)) return call();
        ++pos_;
        return Expr::named(t.text);
      case Token::Punct:
        if (t.text == "(") {
          ++pos_;
          ExprPtr e = expr();
          expect(")");
          return e;
        }
        fail(t, "unexpected '" + t.text + "'");
      case Token::End:
        break;
    }
    fail(t, "unexpected end of input");
  }

  ExprPtr klass() {
    pos_ += 2;
    std::vector<int> signs;
    std::vector<ExprPtr> entries;
    if (!at_punct("]")) {
      while (true) {
        if (!at_punct("+") && !at_punct("-")) fail(peek(), "K-class entries start with + or -");
        signs.push_back(peek().text == "+" ? 1 : -1);
        ++pos_;
        entries.push_back(term());
        if (!at_punct(",")) break;
        ++pos_;
      }
    }
    expect("]");
    return Expr::klass(std::move(signs), std::move(entries));
  }

  ExprPtr call() {
    const std::string fn = peek().text;
    ++pos_;
    expect("(");
    ExprPtr arg = expr();
    if (fn == "expand") {
      expect(",");
      const Token v = peek();
      if (v.type != Token::Ident) fail(v, "expected a variable name");
      ++pos_;
      expect(",");
      const Token at = peek();
      if (at.type != Token::Ident || (at.text != "inf" && at.text != "zero" && at.text != "both"))
        fail(at, "expected inf, zero or both");
      ++pos_;
      expect(")");
      return Expr::expand(arg, v.text, at.text);
    }
    expect(")");
    const auto k = fn == "delta" ? Expr::Kind::Delta : fn == "wedge" ? Expr::Kind::Wedge : Expr::Kind::Sym;
    return Expr::unary(k, arg);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expr(std::string_view text) { return Parser(tokenize(text)).parse_all(); }

// ---- printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Neg:
      return 3;
    case Expr::Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string print(const Expr& e, int context) {
  using K = Expr::Kind;
  std::string s;
  switch (e.kind) {
    case K::Integer:
      s = e.number.get_str();
      break;
    case K::Name:
      s = e.name;
      break;
    case K::KLiteral:
      s = "K[";
      for (std::size_t i = 0; i < e.args.size(); ++i)
        s += (i ? "," : "") + std::string(e.signs[i] > 0 ? "+" : "-") + print(*e.args[i], 2);
      s += "]";
      break;
    case K::Neg:
      s = "-" + print(*e.args[0], 3);
      break;
    case K::Add:
      s = print(*e.args[0], 1) + " + " + print(*e.args[1], 2);
      break;
    case K::Sub:
      s = print(*e.args[0], 1) + " - " + print(*e.args[1], 2);
      break;
    case K::Mul:
      s = print(*e.args[0], 2) + "*" + print(*e.args[1], 3);
      break;
    case K::Div:
      s = print(*e.args[0], 2) + "/" + print(*e.args[1], 3);
      break;
    case K::Pow:
      s = print(*e.args[0], 5) + "^" + std::to_string(e.exponent);
      break;
    case K::Delta:
      s = "delta(" + print(*e.args[0], 0) + ")";
      break;
    case K::Wedge:
      s = "wedge(" + print(*e.args[0], 0) + ")";
      break;
    case K::Sym:
      s = "sym(" + print(*e.args[0], 0) + ")";
      break;
    case K::Expand:
      s = "expand(" + print(*e.args[0], 0) + ", " + e.name + ", " + e.at + ")";
      break;
  }
  return precedence(e) < context ? "(" + s + ")" : s;
}

}  // namespace

std::string print_expr(const Expr& e) { return print(e, 0); }

// ---- lowering

bool is_formal_variable(std::string_view name) {
  if (name == "x" || name == "y" || name == "z" || name == "w") return true;
  if (name.size() < 2 || name[0] != 'z' || name[1] == '0') return false;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  return true;
}

namespace {

void collect_names(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Name && !is_formal_variable(e.name)) out.insert(e.name);
  for (const auto& a : e.args) collect_names(*a, out);
}

std::optional<ScaledMonomial> monomial_of(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Integer:
      if (e.number == 1) return ScaledMonomial{};
      return std::nullopt;
    case K::Name:
      if (is_formal_variable(e.name)) return ScaledMonomial::var(e.name);
      return ScaledMonomial{UnitMonomial::generator(e.name), {}};
    case K::Neg:
      if (auto m = monomial_of(*e.args[0])) return ScaledMonomial{-m->unit, m->mono};
      return std::nullopt;
    case K::Mul:
    case K::Div: {
      auto a = monomial_of(*e.args[0]);
      auto b = monomial_of(*e.args[1]);
      if (!a || !b) return std::nullopt;
      return *a * (e.kind == K::Mul ? *b : b->inverse());
    }
    case K::Pow:
      if (auto m = monomial_of(*e.args[0])) return m->pow(e.exponent);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

ScaledMonomial require_monomial(const Expr& e, const std::string& where) {
  auto m = monomial_of(e);
  if (!m) throw Error(ErrorCode::UsageError, where + " needs a monomial, got " + print_expr(e));
  return *m;
}

UnitMonomial require_unit(const Expr& e) {
  const ScaledMonomial m = require_monomial(e, "a K-class entry");
  if (!m.mono.empty() || m.unit.sign != 1)
    throw Error(ErrorCode::UsageError, "K-class entries are products of ring generators, got " + print_expr(e));
  return m.unit;
}

[[noreturn]] void unsupported(const std::string& op, const Value& a, const Value& b) {
  throw Error(ErrorCode::UsageError, "cannot apply " + op + " to " + value_kind(a) + " and " + value_kind(b));
}

FormalDist as_dist(const Value& v) {
  if (auto d = std::get_if<FormalDist>(&v)) return *d;
  return FormalDist::from_poly(as_polynomial(std::get<RatFun>(v)));
}

bool is_function(const Value& v) { return std::holds_alternative<RatFun>(v); }
bool is_dist(const Value& v) { return std::holds_alternative<FormalDist>(v); }
bool is_class(const Value& v) { return std::holds_alternative<KClass>(v); }

Value add(const Value& a, const Value& b, bool subtract) {
  const std::string op = subtract ? "-" : "+";
  if (is_function(a) && is_function(b))
    return subtract ? std::get<RatFun>(a) - std::get<RatFun>(b) : std::get<RatFun>(a) + std::get<RatFun>(b);
  if (is_class(a) && is_class(b))
    return subtract ? std::get<KClass>(a) - std::get<KClass>(b) : std::get<KClass>(a) + std::get<KClass>(b);
  if ((is_dist(a) || is_function(a)) && (is_dist(b) || is_function(b)))
    return subtract ? as_dist(a) - as_dist(b) : as_dist(a) + as_dist(b);
  unsupported(op, a, b);
}

Value negate(const Value& a) {
  if (auto f = std::get_if<RatFun>(&a)) return -*f;
  if (auto d = std::get_if<FormalDist>(&a)) return -*d;
  if (auto k = std::get_if<KClass>(&a)) return -*k;
  throw Error(ErrorCode::UsageError, "cannot negate " + value_kind(a));
}

Value multiply(const Value& a, const Value& b) {
  if (is_function(a) && is_function(b)) return std::get<RatFun>(a) * std::get<RatFun>(b);
  if (is_class(a) && is_class(b)) return std::get<KClass>(a) * std::get<KClass>(b);
  if (is_dist(a) && is_function(b)) return dist_mul(std::get<FormalDist>(a), std::get<RatFun>(b));
  if (is_function(a) && is_dist(b)) return dist_mul(std::get<FormalDist>(b), std::get<RatFun>(a));
  if (is_dist(a) && is_dist(b)) return dist_mul(std::get<FormalDist>(a), std::get<FormalDist>(b));
  unsupported("*", a, b);
}

void flatten_product(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (e->kind == Expr::Kind::Mul) {
    flatten_product(e->args[0], out);
    flatten_product(e->args[1], out);
  } else if (e->kind == Expr::Kind::Pow && e->exponent > 0) {
    for (int i = 0; i < e->exponent; ++i) flatten_product(e->args[0], out);
  } else {
    out.push_back(e);
  }
}

class Lowering {
 public:
  Lowering(RingPtr ring, int order) : R_(std::move(ring)), order_(order) {}

  Value run(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
      case K::Integer:
        return RatFun::constant(R_, e.number);
      case K::Name:
        if (is_formal_variable(e.name)) return RatFun(LaurentPoly::variable(R_, e.name));
        return RatFun(LaurentPoly::constant(RingElement::generator(R_, e.name)));
      case K::KLiteral: {
        KClass k;
        for (std::size_t i = 0; i < e.args.size(); ++i) k = k + KClass::line(require_unit(*e.args[i]), e.signs[i]);
        return k;
      }
      case K::Neg:
        return negate(run(*e.args[0]));
      case K::Add:
      case K::Sub:
        return add(run(*e.args[0]), run(*e.args[1]), e.kind == K::Sub);
      case K::Mul:
        return mul(e);
      case K::Div:
        return div(e);
      case K::Pow:
        return pow(e);
      case K::Delta:
        return FormalDist::delta(R_, require_monomial(*e.args[0], "delta"));
      case K::Wedge:
      case K::Sym: {
        const ScaledClass c = scaled_class(*e.args[0]);
        return e.kind == K::Wedge ? wedge_series(R_, c.k, c.scale) : sym_series(R_, c.k, c.scale);
      }
      case K::Expand:
        return expand_marker(e);
    }
    throw Error(ErrorCode::UsageError, "unknown expression node");
  }

 private:
  ScaledClass scaled_class(const Expr& e) {
    const Value v = run(e);
    if (auto k = std::get_if<KClass>(&v)) return {*k, {}};
    if (auto c = std::get_if<ScaledClass>(&v)) return *c;
    throw Error(ErrorCode::UsageError, "wedge and sym take a K-class times a monomial, got " + value_kind(v));
  }

  Value mul(const Expr& e) {
    const Value a = run(*e.args[0]);
    const Value b = run(*e.args[1]);
    for (int side = 0; side < 2; ++side) {
      const Value& c = side == 0 ? a : b;
      const Expr& other = *e.args[1 - side];
      const Value& o = side == 0 ? b : a;
      if (!is_function(o)) continue;
      if (auto k = std::get_if<KClass>(&c)) return ScaledClass{*k, require_monomial(other, "scaling a K-class")};
      if (auto s = std::get_if<ScaledClass>(&c))
        return ScaledClass{s->k, s->scale * require_monomial(other, "scaling a K-class")};
    }
    return multiply(a, b);
  }

  Value div(const Expr& e) {
    const Value a = run(*e.args[0]);
    if (is_class(a) || std::holds_alternative<ScaledClass>(a)) {
      const ScaledMonomial m = require_monomial(*e.args[1], "scaling a K-class").inverse();
      if (auto k = std::get_if<KClass>(&a)) return ScaledClass{*k, m};
      const auto& s = std::get<ScaledClass>(a);
      return ScaledClass{s.k, s.scale * m};
    }
    // dividing factor by factor keeps binomial denominators in factored form
    std::vector<ExprPtr> factors;
    flatten_product(e.args[1], factors);
    RatFun inv = RatFun::constant(R_, 1);
    for (const auto& f : factors) {
      const Value v = run(*f);
      if (!is_function(v)) throw Error(ErrorCode::UsageError, "cannot divide by " + value_kind(v));
      inv = inv / std::get<RatFun>(v);
    }
    if (auto d = std::get_if<FormalDist>(&a)) return dist_mul(*d, inv);
    if (auto f = std::get_if<RatFun>(&a)) return *f * inv;
    throw Error(ErrorCode::UsageError, "cannot divide " + value_kind(a));
  }

  Value pow(const Expr& e) {
    const Value base = run(*e.args[0]);
    const int k = e.exponent;
    if (auto f = std::get_if<RatFun>(&base)) {
      RatFun out = RatFun::constant(R_, 1);
      for (int i = 0; i < std::abs(k); ++i) out = k > 0 ? out * *f : out / *f;
      return out;
    }
    if (auto c = std::get_if<KClass>(&base)) {
      if (k < 0) throw Error(ErrorCode::UsageError, "negative power of a K-class");
      KClass out = KClass::trivial();
      for (int i = 0; i < k; ++i) out = out * *c;
      return out;
    }
    throw Error(ErrorCode::UsageError, "cannot raise " + value_kind(base) + " to a power");
  }

  Value expand_marker(const Expr& e) {
    if (!is_formal_variable(e.name)) throw Error(ErrorCode::UsageError, e.name + " is not a formal variable");
    const Value v = run(*e.args[0]);
    const auto* f = std::get_if<RatFun>(&v);
    if (!f) throw Error(ErrorCode::UsageError, "expand needs a rational function, got " + value_kind(v));
    if (e.at == "both") return two_sided(*f, e.name, order_);
    const Series s = expand(*f, e.name, e.at == "inf" ? Direction::AtInfinity : Direction::AtZero, order_);
    DistTerm t;
    t.tail = s.exact ? s.body : s.window(order_);
    t.exact = s.exact;
    t.order = order_;
    t.denom = s.carried;
    return FormalDist::from_term(R_, std::move(t));
  }

  RingPtr R_;
  int order_;
};

}  // namespace

RingPtr ring_for(const Expr& e, const RingPtr& base) {
  std::set<std::string> names;
  collect_names(e, names);
  std::vector<std::string> missing;
  for (const auto& n : names)
    if (!base->find(n)) missing.push_back(n);
  return adjoin_units(base, missing);
}

namespace {

using UniPoly = std::map<int, Integer>;

void trim(UniPoly& p) {
  for (auto it = p.begin(); it != p.end();) it = it->second == 0 ? p.erase(it) : std::next(it);
}

UniPoly uni_mul(const UniPoly& a, const UniPoly& b) {
  UniPoly out;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) out[i + j] += x * y;
  trim(out);
  return out;
}

// Polynomial in one generator; `gen` is fixed by the first name met.
UniPoly univariate(const Expr& e, std::string& gen) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Integer:
      return e.number == 0 ? UniPoly{} : UniPoly{{0, e.number}};
    case K::Name:
      if (!gen.empty() && gen != e.name)
        throw Error(ErrorCode::UnsupportedRelation, "relation mixes " + gen + " and " + e.name);
      gen = e.name;
      return {{1, Integer(1)}};
    case K::Neg: {
      UniPoly p = univariate(*e.args[0], gen);
      for (auto& [i, c] : p) c = -c;
      return p;
    }
    case K::Add:
    case K::Sub: {
      UniPoly p = univariate(*e.args[0], gen);
      for (const auto& [i, c] : univariate(*e.args[1], gen)) p[i] += e.kind == K::Add ? c : Integer(-c);
      trim(p);
      return p;
    }
    case K::Mul:
      return uni_mul(univariate(*e.args[0], gen), univariate(*e.args[1], gen));
    case K::Pow: {
      if (e.exponent < 0) throw Error(ErrorCode::UnsupportedRelation, "negative power in a relation");
      const UniPoly base = univariate(*e.args[0], gen);
      UniPoly p{{0, Integer(1)}};
      for (int i = 0; i < e.exponent; ++i) p = uni_mul(p, base);
      return p;
    }
    default:
      throw Error(ErrorCode::UnsupportedRelation, "relations are integer polynomials");
  }
}

std::vector<std::string> split_top_level(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

RingPtr parse_ring(std::string_view text) {
  const std::string t = strip(text);
  if (t.find('[') == std::string::npos) return presets::by_name(t);
  const auto usage = [&](const std::string& what) {
    return Error(ErrorCode::UsageError, "ring \"" + t + "\": " + what);
  };
  if (t.rfind("Z[", 0) != 0) throw usage("expected Z[...]");
  const auto close = t.find(']');
  if (close == std::string::npos) throw usage("missing ]");
  RingPresentation p;
  p.label = t;
  for (const auto& g : split_top_level(std::string_view(t).substr(2, close - 2))) {
    const std::string name = strip(g);
    if (name.empty()) continue;
    if (is_formal_variable(name)) throw usage(name + " is a formal variable name");
    const ExprPtr n = parse_expr(name);
    if (n->kind != Expr::Kind::Name) throw usage("bad generator " + name);
    p.generators.push_back({name, true});
  }
  std::string rest = strip(std::string_view(t).substr(close + 1));
  if (!rest.empty()) {
    if (rest[0] != '/') throw usage("expected / after the generators");
    rest = strip(std::string_view(rest).substr(1));
    if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')') throw usage("relations go in parentheses");
    for (const auto& r : split_top_level(std::string_view(rest).substr(1, rest.size() - 2))) {
      std::string gen;
      UniPoly poly = univariate(*parse_expr(r), gen);
      if (gen.empty() || poly.empty()) throw Error(ErrorCode::UnsupportedRelation, "constant relation " + strip(r));
      if (poly.rbegin()->second == -1)
        for (auto& [i, c] : poly) c = -c;
      if (poly.begin()->first < 0) throw Error(ErrorCode::UnsupportedRelation, "negative power in a relation");
      Relation rel;
      rel.generator = gen;
      rel.coefficients.assign(static_cast<std::size_t>(poly.rbegin()->first) + 1, Integer(0));
      for (const auto& [i, c] : poly) rel.coefficients[static_cast<std::size_t>(i)] = c;
      p.relations.push_back(std::move(rel));
    }
  }
  return make_ring(std::move(p));
}

Value lower(const Expr& e, const RingPtr& ring, int order) { return Lowering(ring, order).run(e); }

std::string value_to_string(const Value& v) {
  if (auto f = std::get_if<RatFun>(&v)) return f->to_string();
  if (auto d = std::get_if<FormalDist>(&v)) return d->to_string();
  if (auto k = std::get_if<KClass>(&v)) return k->to_string();
  const auto& c = std::get<ScaledClass>(v);
  return c.k.to_string() + "*" + c.scale.to_string();
}

std::string value_kind(const Value& v) {
  switch (v.index()) {
    case 0:
      return "rational function";
    case 1:
      return "distribution";
    case 2:
      return "K-class";
    default:
      return "scaled K-class";
  }
}

}  // namespace khall
