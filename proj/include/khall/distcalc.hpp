#ifndef KHALL_DISTCALC_HPP
#define KHALL_DISTCALC_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "khall/laurent.hpp"

namespace khall {

enum class Direction { AtInfinity, AtZero };

std::string to_string(Direction d);

// One-sided expansion of a rational function in `var`. The body holds all
// variables; coefficients of var^k are body_k / prod(carried), where the
// carried binomials are the denominator factors not involving var.
// At zero the body is complete for k <= order, at infinity for k >= -order.
struct Series {
  std::string var;
  Direction direction = Direction::AtZero;
  int order = 0;
  bool exact = false;  // true for polynomials: body is the whole function
  LaurentPoly body{presets::integers()};
  std::vector<Binomial> carried;

  RatFun coefficient(int k) const;
  // Terms with |k| <= bound.
  LaurentPoly window(int bound) const { return body.restrict_window({var}, bound); }
};

Series expand(const RatFun& f, const std::string& var, Direction direction, int order);

// delta(var / image)
struct DeltaFactor {
  std::string var;
  ScaledMonomial image;

  // Normalizes an argument m: picks the lex-smallest variable with exponent
  // +1 (or -1, after inverting m) as the variable eliminated by the support.
  static DeltaFactor from_argument(const ScaledMonomial& m);
  static DeltaFactor with_var(const ScaledMonomial& m, const std::string& var);

  ScaledMonomial argument() const;
  std::string to_string() const;
  friend auto operator<=>(const DeltaFactor&, const DeltaFactor&) = default;
};

// deltas * tail / prod(denom). The tail never involves a variable eliminated
// by one of the deltas. Non-exact tails are correct for |exponent| <= order.
struct DistTerm {
  std::vector<DeltaFactor> deltas;
  LaurentPoly tail{presets::integers()};
  bool exact = true;
  int order = 0;
  std::vector<Binomial> denom;

  // Eliminated variable -> image with all other eliminations applied.
  std::map<std::string, ScaledMonomial> resolution() const;
};

class FormalDist {
 public:
  explicit FormalDist(RingPtr ring) : ring_(std::move(ring)) {}

  static FormalDist delta(RingPtr ring, const ScaledMonomial& argument);
  static FormalDist from_poly(const LaurentPoly& p);
  static FormalDist from_term(RingPtr ring, DistTerm term);

  const RingPtr& ring() const { return ring_; }
  const std::vector<DistTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  VarList vars() const;

  FormalDist operator-() const;
  friend FormalDist operator+(const FormalDist& a, const FormalDist& b);
  friend FormalDist operator-(const FormalDist& a, const FormalDist& b) { return a + (-b); }
  FormalDist scaled(const RingElement& c) const;

  // Sum of all terms expanded into a single delta-free term on the window
  // |exponent| <= window in every variable. Throws IncompatibleTruncation if
  // some tail is not known far enough out.
  FormalDist densify(int window) const;
  // The dense numerator over the common denominator, on the window.
  std::pair<LaurentPoly, std::vector<Binomial>> dense(int window) const;

  // Deltas sorted by argument, then tails by descending exponent.
  std::string to_string() const;
  nlohmann::json to_json(int window) const;

 private:
  void add_term(DistTerm t);

  RingPtr ring_;
  std::vector<DistTerm> terms_;
};

// Coefficient of the monomial m (inside the window) over the common denominator.
RatFun dist_coefficient(const FormalDist& d, const Monomial& m, int window);

// Coefficientwise equality on |exponent| <= window.
bool window_equal(const FormalDist& a, const FormalDist& b, int window);

// expand(f, inf) - expand(f, 0) on |k| <= order; recognized as c * delta(a var)
// when every coefficient in the window equals c * a^k.
FormalDist two_sided(const RatFun& f, const std::string& var, int order, bool canonicalize = true);
// Termwise on tails: each term's tail / denom is expanded two-sided in var and
// its deltas are multiplied back unchanged.
FormalDist two_sided(const FormalDist& d, const std::string& var, int order);

FormalDist dist_mul(const FormalDist& d, const RatFun& g);
FormalDist dist_mul(const FormalDist& d, const Series& s);
FormalDist dist_mul(const FormalDist& a, const FormalDist& b);

// Two-sided in `first` (coefficients rational in `second`), then two-sided in
// `second`; dense on |exponent| <= order.
FormalDist ordered_double_expand(const RatFun& f, const std::string& first, const std::string& second, int order);

// -(1/alpha) delta(y / (alpha x)) (f(x) g(y))|_{(x,y)=inf-0}, with the tail
// built from f(x) g(alpha x) and known to |exponent| <= 2 order.
FormalDist exchange_defect(const RatFun& f, const RatFun& g, const UnitMonomial& alpha, int order,
                           const std::string& x = "x", const std::string& y = "y");

// f(x) g(y) / (y/x - alpha). Its x-first minus y-first double expansion is
// exchange_defect(f, g, alpha).
RatFun exchange_kernel(const RatFun& f, const RatFun& g, const UnitMonomial& alpha, const std::string& x = "x",
                       const std::string& y = "y");

}  // namespace khall

#endif
