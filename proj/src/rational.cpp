#include "vope/rational.hpp"

#include <numeric>

#include "vope/error.hpp"

namespace vope {

namespace {

bool fits(const mpz_class& z) { return mpz_fits_slong_p(z.get_mpz_t()) && z != LONG_MIN; }

// a*b, false on overflow or a result of INT64_MIN
bool mul(std::int64_t a, std::int64_t b, std::int64_t& r) {
  return !__builtin_mul_overflow(a, b, &r) && r != INT64_MIN;
}

bool add(std::int64_t a, std::int64_t b, std::int64_t& r) {
  return !__builtin_add_overflow(a, b, &r) && r != INT64_MIN;
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw DomainError("division by zero");
  set_big(mpq_class(num) / mpq_class(den));
}

void Rational::set_big(mpq_class q) {
  q.canonicalize();
  if (fits(q.get_num()) && fits(q.get_den())) {
    n_ = q.get_num().get_si();
    d_ = q.get_den().get_si();
    big_.reset();
  } else {
    big_ = std::make_unique<mpq_class>(std::move(q));
  }
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(n_)), mpz_class(static_cast<long>(d_)));
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (n_ > 0) - (n_ < 0);
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : d_ == 1; }

Rational Rational::operator-() const {
  if (big_) {
    Rational r;
    r.set_big(-*big_);
    return r;
  }
  Rational r;
  r.n_ = -n_;
  r.d_ = d_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (!big_ && !o.big_) {
    std::int64_t n, t1, t2, d;
    if (d_ == 1 && o.d_ == 1) {
      if (add(n_, o.n_, n)) {
        n_ = n;
        return *this;
      }
    } else if (mul(n_, o.d_, t1) && mul(o.n_, d_, t2) && add(t1, t2, n) && mul(d_, o.d_, d)) {
      const std::int64_t g = std::gcd(n, d);
      n_ = g ? n / g : 0;
      d_ = g ? d / g : 1;
      return *this;
    }
  }
  set_big(to_mpq() + o.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (n_ == 0 || o.n_ == 0) {
      n_ = 0;
      d_ = 1;
      return *this;
    }
    const std::int64_t g1 = std::gcd(n_, o.d_);
    const std::int64_t g2 = std::gcd(o.n_, d_);
    std::int64_t n, d;
    if (mul(n_ / g1, o.n_ / g2, n) && mul(d_ / g2, o.d_ / g1, d)) {
      n_ = n;
      d_ = d;
      return *this;
    }
  }
  set_big(to_mpq() * o.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  if (!o.big_) {
    Rational inv;
    inv.n_ = o.n_ < 0 ? -o.d_ : o.d_;
    inv.d_ = o.n_ < 0 ? -o.n_ : o.n_;
    return *this *= inv;
  }
  set_big(to_mpq() / o.to_mpq());
  return *this;
}

bool operator==(const Rational& a, const Rational& b) {
  // both sides are canonical, and big values never fit inline
  if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;
}

std::string Rational::to_string() const {
  if (big_) return big_->get_str();
  return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_);
}

}  // namespace vope
