#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "vope/scalar.hpp"

namespace vope {

/// A derived generator: the divided-power derivative of order `deriv` of
/// generator number `gen`.
struct Letter {
  std::uint32_t gen = 0;
  std::uint32_t deriv = 0;

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Standard order on letters: generator index ascending, then derivative
/// order descending.
inline bool letter_less(const Letter& a, const Letter& b) {
  return a.gen != b.gen ? a.gen < b.gen : a.deriv > b.deriv;
}

/// A standard monomial: right-nested normally ordered word
/// :x1 :x2 ... xl:: with letters non-decreasing under letter_less. The empty
/// word is the identity field; one letter is a single derived generator.
class Monomial {
 public:
  using Letters = boost::container::small_vector<Letter, 6>;

  Monomial() = default;
  explicit Monomial(Letter x) : letters_{x} {}
  /// Letters must already be in standard order.
  explicit Monomial(Letters letters);
  explicit Monomial(const std::vector<Letter>& letters)
      : Monomial(Letters(letters.begin(), letters.end())) {}

  static Monomial identity() { return {}; }

  const Letters& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  bool is_identity() const { return letters_.empty(); }
  const Letter& front() const { return letters_.front(); }
  /// The word without its first letter.
  Monomial rest() const;
  /// Prepends `x`; requires x <= front().
  Monomial prepend(Letter x) const;

  /// Lexicographic on letters (shorter prefix first). Total order.
  friend bool operator<(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) = default;

  std::size_t hash() const;

 private:
  Letters letters_;
};

/// splitmix64 finalizer applied to seed ^ v.
inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  std::uint64_t z = seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<std::size_t>(z ^ (z >> 31));
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Canonical linear combination of standard monomials; zero coefficients are
/// never stored, so map equality is expression equality.
class NormalForm {
 public:
  using Map = std::map<Monomial, Scalar>;

  NormalForm() = default;
  NormalForm(const Monomial& m, Scalar c = Scalar(1));  // NOLINT
  static NormalForm identity(Scalar c = Scalar(1)) { return NormalForm(Monomial{}, std::move(c)); }
  static NormalForm letter(Letter x, Scalar c = Scalar(1)) {
    return NormalForm(Monomial(x), std::move(c));
  }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  /// Coefficient of `m` (zero when absent).
  Scalar coeff(const Monomial& m) const;

  void add_term(const Monomial& m, const Scalar& c);
  /// this += c * other
  void add_scaled(const NormalForm& other, const Scalar& c);

  NormalForm& operator+=(const NormalForm& o);
  NormalForm& operator-=(const NormalForm& o);
  NormalForm operator-() const;
  friend NormalForm operator+(NormalForm a, const NormalForm& b) { return a += b; }
  friend NormalForm operator-(NormalForm a, const NormalForm& b) { return a -= b; }
  friend NormalForm operator*(const Scalar& c, const NormalForm& a);
  friend bool operator==(const NormalForm& a, const NormalForm& b);

  /// Applies `f` to every coefficient, dropping zeros.
  NormalForm map_coeffs(const std::function<Scalar(const Scalar&)>& f) const;

 private:
  void add_constant_multiple(const NormalForm& other, const Gaussian& k);

  Map terms_;
};

}  // namespace vope
