#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>

namespace vope {

/// Exact rational number. Values whose numerator and denominator fit in 63
/// bits are stored inline; anything larger falls back to GMP.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : n_(v) {  // NOLINT(google-explicit-constructor)
    if (v == INT64_MIN) set_big(mpq_class(v));
  }
  Rational(const mpq_class& q) { set_big(q); }  // NOLINT(google-explicit-constructor)
  Rational(const mpz_class& z) { set_big(mpq_class(z)); }  // NOLINT
  /// num/den; den != 0.
  Rational(long num, long den);

  Rational(const Rational& o) : n_(o.n_), d_(o.d_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
  }
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      n_ = o.n_;
      d_ = o.d_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;

  mpq_class to_mpq() const;
  int sign() const;
  bool is_zero() const { return !big_ && n_ == 0; }
  bool is_one() const { return !big_ && n_ == 1 && d_ == 1; }
  bool is_integer() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  /// Requires o != 0.
  Rational& operator/=(const Rational& o);
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b);

  /// `n` or `n/d`.
  std::string to_string() const;

 private:
  void set_big(mpq_class q);

  // inline value n_/d_ with d_ > 0 and gcd 1, unless big_ is set
  std::int64_t n_ = 0;
  std::int64_t d_ = 1;
  std::unique_ptr<mpq_class> big_;
};

}  // namespace vope
