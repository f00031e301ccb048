#ifndef KHALL_RING_HPP
#define KHALL_RING_HPP

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace khall {

using Integer = mpz_class;
using Exponents = std::vector<int>;
// Sparse term storage. Keys are exponent vectors; the lexicographic order of
// std::vector is the monomial order used everywhere (descending = leading).
using TermMap = std::map<Exponents, Integer>;

struct GeneratorSpec {
  std::string name;
  bool invertible = true;
};

// Monic univariate relation p(g) = 0, coefficients listed lowest degree first.
struct Relation {
  std::string generator;
  std::vector<Integer> coefficients;

  // (g - root)^multiplicity
  static Relation binomial_power(std::string generator, const Integer& root, int multiplicity);
};

// The diagonal symbol D: D^2 is an error and, inside any term carrying D,
// each tagged generator is replaced by its plain counterpart.
struct DiagonalRule {
  std::string symbol;
  std::vector<std::pair<std::string, std::string>> merge;  // tagged -> plain
};

struct RingPresentation {
  std::string label;
  std::vector<GeneratorSpec> generators;
  std::vector<Relation> relations;
  std::optional<DiagonalRule> diagonal;
};

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(RingPresentation presentation);

// Free extension by new invertible generators; `ring` itself is untouched.
RingPtr adjoin_units(const RingPtr& ring, const std::vector<std::string>& names);

class Ring {
 public:
  explicit Ring(RingPresentation presentation);

  const RingPresentation& presentation() const { return presentation_; }
  const std::string& label() const { return presentation_.label; }
  std::size_t size() const { return presentation_.generators.size(); }
  const std::string& generator_name(std::size_t i) const { return presentation_.generators[i].name; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;

  bool invertible(std::size_t i) const { return presentation_.generators[i].invertible; }
  bool has_relation(std::size_t i) const { return !relation_[i].empty(); }
  int relation_degree(std::size_t i) const { return static_cast<int>(relation_[i].size()) - 1; }
  bool is_diagonal_symbol(std::size_t i) const { return diagonal_ && *diagonal_ == i; }
  bool is_merged(std::size_t i) const;
  std::optional<std::size_t> diagonal_index() const { return diagonal_; }

  // True when normal forms are raw exponent vectors (no relation, no D).
  bool is_free() const { return free_; }
  // True when generator i never changes under normalization.
  bool is_plain(std::size_t i) const;

  // Normalizes coeff * g^exps[offset..] (exps may carry leading formal
  // variable exponents which are left alone) and accumulates into out.
  void accumulate(Exponents exps, std::size_t offset, const Integer& coeff, TermMap& out) const;

  // Coefficients of g^k reduced modulo the relation of generator i.
  std::vector<Integer> reduced_power(std::size_t i, int k) const;

 private:
  RingPresentation presentation_;
  std::vector<std::vector<Integer>> relation_;   // monic, per generator (empty if free)
  std::vector<std::vector<Integer>> inverse_;    // g^{-1} mod relation
  std::optional<std::size_t> diagonal_;
  std::vector<std::pair<std::size_t, std::size_t>> merge_;
  bool free_ = true;
  bool has_relations_ = false;
};

class RingElement {
 public:
  explicit RingElement(RingPtr ring);

  static RingElement constant(RingPtr ring, const Integer& value);
  static RingElement generator(RingPtr ring, std::string_view name);
  // g^exps, any integer exponents for invertible generators
  static RingElement monomial(RingPtr ring, const Exponents& exps, const Integer& coeff = 1);
  static RingElement from_named(RingPtr ring, const std::map<std::string, int>& powers,
                                const Integer& coeff = 1);
  // Normalizes an arbitrary (unreduced) term map.
  static RingElement normalize(RingPtr ring, const TermMap& raw);

  const RingPtr& ring() const { return ring_; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  std::optional<Integer> as_integer() const;

  RingElement operator-() const;
  RingElement& operator+=(const RingElement& other);
  RingElement& operator-=(const RingElement& other);
  RingElement& operator*=(const RingElement& other);
  friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
  friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
  friend RingElement operator*(const RingElement& a, const RingElement& b);
  friend bool operator==(const RingElement& a, const RingElement& b);
  friend bool operator!=(const RingElement& a, const RingElement& b) { return !(a == b); }

  RingElement pow(unsigned n) const;

  // Inverse of a single-term element with coefficient +-1 built from
  // invertible generators; nullopt otherwise.
  std::optional<RingElement> unit_inverse() const;

  // Exact quotient, or nullopt if `divisor` does not divide. Supported
  // divisors: units, integer constants, and elements whose generators are all
  // plain (free Laurent part of the ring). Throws NotDivisible otherwise.
  std::optional<RingElement> divide_exact(const RingElement& divisor) const;

  // Maps the element into `target` by generator name.
  RingElement embed(const RingPtr& target) const;

  std::string to_string() const;

 private:
  RingElement(RingPtr ring, TermMap terms) : ring_(std::move(ring)), terms_(std::move(terms)) {}
  friend class LaurentPoly;

  RingPtr ring_;
  TermMap terms_;
};

void require_same_ring(const RingPtr& a, const RingPtr& b);

namespace presets {

// "Z": no generators
RingPtr integers();
// "P2": K(P^2) = Z[t^{+-1}]/(t-1)^3, t = [O(1)]
RingPtr projective_plane();
// "P1xP1": Z[a^{+-1}, b^{+-1}]/((a-1)^2, (b-1)^2)
RingPtr p1xp1();
// "free": same as Z; callers adjoin the units they need
RingPtr by_name(std::string_view name);

}  // namespace presets

namespace detail {

// Shared helpers over flat term maps. `offset` is the number of leading
// formal-variable slots in every key.
void add_into(TermMap& out, const TermMap& in, bool negate = false);
TermMap multiply_terms(const Ring& ring, std::size_t offset, const TermMap& a, const TermMap& b);

std::string format_integer(const Integer& v);
// Exact division treating every key slot as a free Laurent variable.
std::optional<TermMap> divide_raw(const TermMap& p, const TermMap& d);

}  // namespace detail

}  // namespace khall

#endif
