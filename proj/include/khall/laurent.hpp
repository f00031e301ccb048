#ifndef KHALL_LAURENT_HPP
#define KHALL_LAURENT_HPP

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "khall/ring.hpp"

namespace khall {

// Sorted, duplicate-free list of formal variable names.
using VarList = std::vector<std::string>;

VarList merge_vars(const VarList& a, const VarList& b);

// Monomial in the formal variables, stored sparsely by name.
struct Monomial {
  std::map<std::string, int> powers;

  static Monomial var(const std::string& name, int power = 1);

  bool empty() const { return powers.empty(); }
  int degree(const std::string& name) const;
  Monomial inverse() const;
  Monomial pow(int k) const;
  Monomial without(const std::string& name) const;
  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  std::string to_string() const;
};

// +-(product of invertible ring generators), stored by generator name so the
// same value can be used over any ring that has those generators.
struct UnitMonomial {
  int sign = 1;
  std::map<std::string, int> powers;

  static UnitMonomial one() { return {}; }
  static UnitMonomial generator(const std::string& name, int power = 1);

  bool is_one() const { return sign == 1 && powers.empty(); }
  UnitMonomial inverse() const;
  UnitMonomial pow(int k) const;
  friend UnitMonomial operator*(const UnitMonomial& a, const UnitMonomial& b);
  friend UnitMonomial operator-(const UnitMonomial& a) { return {-a.sign, a.powers}; }
  friend auto operator<=>(const UnitMonomial&, const UnitMonomial&) = default;
  RingElement to_element(const RingPtr& ring) const;
  std::string to_string() const;
};

// unit * monomial, e.g. q^-1 * w^-1
struct ScaledMonomial {
  UnitMonomial unit;
  Monomial mono;

  static ScaledMonomial var(const std::string& name, int power = 1) { return {{}, Monomial::var(name, power)}; }

  ScaledMonomial inverse() const { return {unit.inverse(), mono.inverse()}; }
  ScaledMonomial pow(int k) const { return {unit.pow(k), mono.pow(k)}; }
  friend ScaledMonomial operator*(const ScaledMonomial& a, const ScaledMonomial& b) {
    return {a.unit * b.unit, a.mono * b.mono};
  }
  friend auto operator<=>(const ScaledMonomial&, const ScaledMonomial&) = default;
  std::string to_string() const;
};

// The factor (1 - a). Constant binomials (a.mono empty) appear after
// substitutions such as w -> z in 1 - q w / z.
struct Binomial {
  ScaledMonomial a;

  bool is_constant() const { return a.mono.empty(); }
  bool involves(const std::string& var) const { return a.mono.degree(var) != 0; }
  friend auto operator<=>(const Binomial&, const Binomial&) = default;
  std::string to_string() const;
};

// 1 - a = prefactor * (1 - a') with a' oriented so that its first nonzero
// exponent (variables first, then generators) is positive.
std::pair<ScaledMonomial, Binomial> orient(const Binomial& b);

class LaurentPoly {
 public:
  explicit LaurentPoly(RingPtr ring, VarList vars = {});

  static LaurentPoly constant(const RingElement& c);
  static LaurentPoly constant(RingPtr ring, const Integer& c);
  static LaurentPoly variable(RingPtr ring, const std::string& name, int power = 1);
  static LaurentPoly from(RingPtr ring, const ScaledMonomial& m);
  static LaurentPoly from(RingPtr ring, const Binomial& b);
  static LaurentPoly term(const Monomial& m, const RingElement& c);
  // `terms` must already be in normal form with keys laid out as in terms().
  static LaurentPoly from_terms(RingPtr ring, VarList vars, TermMap terms);

  const RingPtr& ring() const { return ring_; }
  const VarList& vars() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  // Flat storage: key = variable exponents followed by generator exponents.
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  std::optional<RingElement> as_constant() const;
  // Coefficients grouped by variable exponents, ascending lex order.
  std::map<Exponents, RingElement> coefficients() const;
  RingElement coefficient(const Monomial& m) const;
  // Monomial with these variable exponents (aligned with vars()).
  Monomial monomial_of(const Exponents& var_exps) const;

  LaurentPoly with_vars(const VarList& superset) const;
  // Drops variables that no term uses.
  LaurentPoly compact() const;
  bool involves(const std::string& var) const;
  int min_degree(const std::string& var) const;
  int max_degree(const std::string& var) const;
  // Largest |exponent| of any variable in any term.
  int max_abs_degree() const;
  // Groups terms by the exponent of var; the pieces no longer carry var.
  std::map<int, LaurentPoly> split(const std::string& var) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& other);
  LaurentPoly& operator-=(const LaurentPoly& other);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(const LaurentPoly& a, const RingElement& c);
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }
  LaurentPoly pow(unsigned n) const;

  // a * b keeping only terms whose exponent of `var` is <= max_exp.
  static LaurentPoly multiply_truncated(const LaurentPoly& a, const LaurentPoly& b,
                                        const std::string& var, int max_exp);

  // a * b keeping only terms with |exponent| <= bound in every variable.
  static LaurentPoly multiply_window(const LaurentPoly& a, const LaurentPoly& b, int bound);
  LaurentPoly substitute(const std::string& var, const ScaledMonomial& image) const;
  // Variable renaming; the map must be injective on vars().
  LaurentPoly rename(const std::map<std::string, std::string>& names) const;
  // var -> var^{-1}
  LaurentPoly invert_var(const std::string& var) const;
  // Keeps terms with |exponent| <= bound in every listed variable.
  LaurentPoly restrict_window(const VarList& window_vars, int bound) const;

  // Exact quotient or nullopt. The leading coefficient of the divisor must be
  // invertible, an integer, or divisible in the sense of RingElement::divide_exact.
  std::optional<LaurentPoly> divide_exact(const LaurentPoly& divisor) const;

  // Variables in lex order, multidegrees descending.
  std::string to_string() const;

 private:
  LaurentPoly(RingPtr ring, VarList vars, TermMap terms)
      : ring_(std::move(ring)), vars_(std::move(vars)), terms_(std::move(terms)) {}
  friend class RatFun;

  RingPtr ring_;
  VarList vars_;
  TermMap terms_;
};

// Quotient of Laurent polynomials. When the denominator is a product of
// binomials it is kept in that factored form, which the expansion operators
// require; otherwise only the plain numerator/denominator pair is stored.
class RatFun {
 public:
  explicit RatFun(LaurentPoly num);
  RatFun(LaurentPoly num, std::vector<Binomial> factors);
  static RatFun quotient(const LaurentPoly& num, const LaurentPoly& den);
  static RatFun constant(RingPtr ring, const Integer& c) { return RatFun(LaurentPoly::constant(std::move(ring), c)); }

  const RingPtr& ring() const { return num_.ring(); }
  VarList vars() const;
  const LaurentPoly& num() const { return num_; }
  LaurentPoly den() const;
  bool factored() const { return !den_; }
  // Denominator binomials; empty for polynomials. Only meaningful if factored().
  const std::vector<Binomial>& factors() const { return factors_; }

  bool is_zero() const { return num_.is_zero(); }

  RatFun operator-() const;
  friend RatFun operator+(const RatFun& a, const RatFun& b);
  friend RatFun operator-(const RatFun& a, const RatFun& b);
  friend RatFun operator*(const RatFun& a, const RatFun& b);
  friend RatFun operator/(const RatFun& a, const RatFun& b);
  friend bool operator==(const RatFun& a, const RatFun& b);
  friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

  RatFun substitute(const std::string& var, const ScaledMonomial& image) const;
  RatFun rename(const std::map<std::string, std::string>& names) const;
  RatFun invert_var(const std::string& var) const;

  std::string to_string() const;

 private:
  RatFun(LaurentPoly num, LaurentPoly den);
  void normalize();

  LaurentPoly num_;
  std::optional<LaurentPoly> den_;  // set only when not factored
  std::vector<Binomial> factors_;
};

// Recognizes p = prefactor * (1 - a) (binomial) or p = prefactor (unit
// monomial, no binomial). Returns nullopt for anything else.
std::optional<std::pair<ScaledMonomial, std::optional<Binomial>>> recognize_binomial(const LaurentPoly& p);

// Sum over all permutations of `vars` (no 1/n! normalization).
RatFun symmetrize(const RatFun& f, const VarList& vars);

// The Laurent polynomial equal to f; throws NotPolynomial otherwise.
LaurentPoly as_polynomial(const RatFun& f);

}  // namespace khall

#endif
