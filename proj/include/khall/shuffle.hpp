#ifndef KHALL_SHUFFLE_HPP
#define KHALL_SHUFFLE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "khall/laurent.hpp"

namespace khall {

// z1 .. zn
VarList shuffle_vars(int n);

// Symmetric Laurent polynomial in z1..zn over the integers.
class ShuffleElement {
 public:
  // Degree-0 element c.
  static ShuffleElement scalar(long c);
  // z^a in degree 1.
  static ShuffleElement generator(int a);

  int degree() const { return degree_; }
  const LaurentPoly& value() const { return value_; }
  bool is_zero() const { return value_.is_zero(); }

  friend ShuffleElement operator+(const ShuffleElement& a, const ShuffleElement& b);
  friend ShuffleElement operator-(const ShuffleElement& a, const ShuffleElement& b);
  friend ShuffleElement operator*(long c, const ShuffleElement& a);
  friend bool operator==(const ShuffleElement& a, const ShuffleElement& b);
  friend bool operator!=(const ShuffleElement& a, const ShuffleElement& b) { return !(a == b); }

  std::string to_string() const { return value_.to_string(); }
  // {"degree": n, "terms": [{"exponents": [..], "coefficient": ".."}, ...]}
  nlohmann::json to_json() const;

 private:
  ShuffleElement(int degree, LaurentPoly value) : degree_(degree), value_(std::move(value)) {}
  friend ShuffleElement canonicalize(const LaurentPoly& p, int degree);

  int degree_;
  LaurentPoly value_;
};

// Checks that p lives in z1..z_degree over the integers and is symmetric.
ShuffleElement canonicalize(const LaurentPoly& p, int degree);

// Sym( f(z1..zn) g(z_{n+1}..z_{n+m}) / prod_{i<=n<j} (1 - z_i/z_j) ), summed
// over shuffles (the full permutation sum divided by n! m!).
ShuffleElement shuffle_mul(const ShuffleElement& f, const ShuffleElement& g);

}  // namespace khall

#endif
