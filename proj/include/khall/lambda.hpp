#ifndef KHALL_LAMBDA_HPP
#define KHALL_LAMBDA_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "khall/distcalc.hpp"
#include "khall/laurent.hpp"

namespace khall {

// Split virtual class: signed multiset of line elements (unit monomials with
// sign +1). Equal elements in the plus and minus parts cancel on construction.
class KClass {
 public:
  KClass() = default;
  static KClass line(const UnitMonomial& u, int multiplicity = 1);
  static KClass trivial(int multiplicity = 1) { return line(UnitMonomial::one(), multiplicity); }

  const std::map<UnitMonomial, int>& multiplicities() const { return mult_; }
  std::vector<UnitMonomial> plus() const;
  std::vector<UnitMonomial> minus() const;
  bool is_zero() const { return mult_.empty(); }

  int rank() const;
  UnitMonomial det() const;
  KClass dual() const;
  // Multiplies every line element by u.
  KClass twist(const UnitMonomial& u) const;
  // Renames generators, e.g. f1 -> f1_1 for a superscript tag.
  KClass rename(const std::map<std::string, std::string>& names) const;
  // Sum of line elements with signs, as a ring element.
  RingElement character(const RingPtr& ring) const;

  KClass operator-() const;
  friend KClass operator+(const KClass& a, const KClass& b);
  friend KClass operator-(const KClass& a, const KClass& b) { return a + (-b); }
  friend KClass operator*(const KClass& a, const KClass& b);
  friend bool operator==(const KClass&, const KClass&) = default;

  // K[+u,+v,-1]
  std::string to_string() const;

 private:
  void add(const UnitMonomial& u, int k);

  std::map<UnitMonomial, int> mult_;
};

// prod_{plus}(1 - u arg) / prod_{minus}(1 - u arg), denominators tracked.
RatFun wedge_series(const RingPtr& ring, const KClass& k, const ScaledMonomial& arg);
// arg = scale * var
RatFun wedge_series(const RingPtr& ring, const KClass& k, const std::string& var,
                    const ScaledMonomial& scale = {});
// 1 / wedge_series
RatFun sym_series(const RingPtr& ring, const KClass& k, const ScaledMonomial& arg);

// two_sided(wedge_series((L - 1) K, var), var, order); K must have rank 0.
FormalDist twisted_expansion(const RingPtr& ring, const KClass& k, const UnitMonomial& l, int order,
                             const std::string& var = "x");

struct TwistedCheck {
  RingElement coefficient_minus;  // of var^-1
  RingElement expected_minus;     // (1 - L^-1) K^dual
  RingElement coefficient_zero;
  RingElement coefficient_plus;   // of var
  RingElement expected_plus;      // (L - 1) K
  bool pass = false;
};

TwistedCheck check_twisted_expansion(const RingPtr& ring, const KClass& k, const UnitMonomial& l, int order,
                                     const std::string& var = "x");

// Euler characteristic functional on a toy K(S), given on the normal-form
// monomial basis of the surface ring.
struct ChiTable {
  std::string surface;
  std::string ring_preset;
  std::string derivation;
  std::map<std::map<std::string, int>, Integer> values;

  static ChiTable from_json(const nlohmann::json& j);
  // "P2" or "P1xP1"
  static const ChiTable& preset(const std::string& name);
};

// Linear extension of the table. Generators outside the surface ring are
// carried along as coefficients, so the result lives in `e`'s ring with every
// surface generator exponent set to zero. UnknownMonomial if a surface
// monomial is missing from the table.
RingElement chi(const ChiTable& table, const RingElement& e);
// Same, for elements with no extra generators.
Integer chi_integer(const ChiTable& table, const RingElement& e);

}  // namespace khall

#endif
