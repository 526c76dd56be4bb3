#pragma once

#include <gmpxx.h>

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vope/rational.hpp"

namespace vope {

/// Exact element of Q(i): re + im*i with rational parts.
class Gaussian {
 public:
  Gaussian() = default;
  Gaussian(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  Gaussian(Rational re) : re_(std::move(re)) {}  // NOLINT
  Gaussian(const mpq_class& re) : re_(re) {}  // NOLINT
  Gaussian(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static Gaussian imaginary_unit() { return Gaussian(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_one() const { return re_.is_one() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  Gaussian operator-() const { return Gaussian(-re_, -im_); }
  Gaussian& operator+=(const Gaussian& o);
  Gaussian& operator-=(const Gaussian& o);
  Gaussian& operator*=(const Gaussian& o);
  Gaussian& operator/=(const Gaussian& o);  // throws DomainError on zero
  /// this += a * b without temporaries for real operands.
  void add_product(const Gaussian& a, const Gaussian& b);

  friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
  friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
  friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
  friend Gaussian operator/(Gaussian a, const Gaussian& b) { return a /= b; }
  friend bool operator==(const Gaussian& a, const Gaussian& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::string to_string() const;

 private:
  Rational re_;
  Rational im_;
};

/// Ordered parameter symbols shared by all scalars of one algebra.
/// Variable index = declaration order; index 0 is the most significant
/// variable in the monomial order.
class ParamSpace {
 public:
  explicit ParamSpace(std::vector<std::string> names);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  /// Index of `name`, or -1.
  int index_of(std::string_view name) const;

  friend bool operator==(const ParamSpace& a, const ParamSpace& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
};

using ParamSpacePtr = std::shared_ptr<const ParamSpace>;

/// Sparse exponent vector: (variable index, exponent > 0), sorted by index.
using Monom = boost::container::small_vector<std::pair<std::uint32_t, std::uint32_t>, 2>;

/// Multivariate polynomial over Q(i) in sparse form. Terms are kept sorted
/// descending under graded-lex order (total degree first, then variable 0
/// most significant). Zero coefficients are never stored.
class Poly {
 public:
  struct Term {
    Monom monom;
    Gaussian coeff;
  };

  using Terms = boost::container::small_vector<Term, 1>;

  Poly() = default;
  static Poly constant(const Gaussian& c);
  static Poly variable(std::uint32_t var);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  /// Coefficient of the leading term; poly must be nonzero.
  const Gaussian& leading_coeff() const { return terms_.front().coeff; }
  Gaussian constant_term() const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Gaussian& c) const;
  /// this += c * o, in place when the supports agree.
  void add_scaled(const Poly& o, const Gaussian& c);
  friend bool operator==(const Poly& a, const Poly& b);

  /// Exact quotient; throws std::logic_error when `d` does not divide.
  Poly exact_div(const Poly& d) const;
  /// Greatest common divisor, normalized to leading coefficient 1
  /// (gcd(0, 0) = 0).
  static Poly gcd(const Poly& a, const Poly& b);
  /// Makes the leading coefficient 1.
  Poly monic() const;

  /// Evaluates with values[v] bound to variable v.
  Gaussian eval(std::span<const Gaussian> values) const;
  /// Largest variable index occurring plus one.
  std::uint32_t var_bound() const;

  static bool monom_less(const Monom& a, const Monom& b);

 private:
  explicit Poly(Terms terms) : terms_(std::move(terms)) {}
  static Poly from_unsorted(Terms terms);

  Terms terms_;

  friend struct PolyAccess;
};

/// Exact rational function in the parameters of one algebra with Q(i)
/// coefficients. Always canonical: numerator and denominator coprime and the
/// denominator has leading coefficient 1, so equality is structural.
class Scalar {
 public:
  Scalar() : den_(Poly::constant(1)) {}
  Scalar(long v) : num_(Poly::constant(v)), den_(Poly::constant(1)) {}  // NOLINT
  Scalar(const Gaussian& v)  // NOLINT(google-explicit-constructor)
      : num_(Poly::constant(v)), den_(Poly::constant(1)) {}
  static Scalar rational(long num, long den);
  static Scalar imaginary_unit() { return Scalar(Gaussian::imaginary_unit()); }
  /// The parameter `name` of `space`; throws DomainError when undeclared.
  static Scalar param(const ParamSpacePtr& space, std::string_view name);

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }
  const ParamSpacePtr& space() const { return space_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_one(); }
  /// Value of a constant scalar; throws DomainError if parameters occur.
  Gaussian to_constant() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  /// Multiplication by a constant, skipping canonicalization.
  Scalar scaled(const Gaussian& c) const;
  /// this += k * o.
  void add_scaled(const Scalar& o, const Gaussian& k);
  Scalar pow(int e) const;

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// Substitutes every parameter. Throws DomainError on an unbound
  /// parameter or a vanishing denominator.
  Scalar eval(const std::map<std::string, Gaussian>& bindings) const;

  /// Text form: `i` for the imaginary unit, `^` for powers, explicit `*`.
  std::string to_string() const;
  std::string to_latex() const;
  /// True when to_string() needs parentheses as a factor of a product.
  bool needs_parens() const;

 private:
  Scalar(ParamSpacePtr space, Poly num, Poly den);
  void canonicalize();
  void unify_space(const Scalar& o);

  ParamSpacePtr space_;
  Poly num_;
  Poly den_;
};

/// Parses the text grammar produced by Scalar::to_string. Identifiers must
/// be parameters of `space` (or `i`).
Scalar parse_scalar(std::string_view text, const ParamSpacePtr& space);

/// Generalized binomial coefficient C(n, k) for any integer n, k >= 0.
mpz_class binomial(long n, long k);

}  // namespace vope
