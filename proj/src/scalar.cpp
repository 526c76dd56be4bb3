#include "vope/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "vope/error.hpp"

namespace vope {

// ---------------------------------------------------------------------------
// Gaussian

Gaussian& Gaussian::operator+=(const Gaussian& o) {
  re_ += o.re_;
  if (!o.im_.is_zero()) im_ += o.im_;
  return *this;
}

Gaussian& Gaussian::operator-=(const Gaussian& o) {
  re_ -= o.re_;
  if (!o.im_.is_zero()) im_ -= o.im_;
  return *this;
}

void Gaussian::add_product(const Gaussian& a, const Gaussian& b) {
  if (a.is_real() && b.is_real()) {
    if (b.re_.is_one()) {
      re_ += a.re_;
    } else {
      re_ += a.re_ * b.re_;
    }
    return;
  }
  *this += a * b;
}

Gaussian& Gaussian::operator*=(const Gaussian& o) {
  if (im_.is_zero() && o.im_.is_zero()) {
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

Gaussian& Gaussian::operator/=(const Gaussian& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  if (o.im_.is_zero()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  Rational norm = o.re_ * o.re_ + o.im_ * o.im_;
  Rational re = (re_ * o.re_ + im_ * o.im_) / norm;
  Rational im = (im_ * o.re_ - re_ * o.im_) / norm;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

namespace {

std::string rat_str(const Rational& q) { return q.to_string(); }

std::string rat_latex(const Rational& r) {
  const mpq_class q = r.to_mpq();
  if (q.get_den() == 1) return q.get_num().get_str();
  std::string s = sgn(q) < 0 ? "-" : "";
  mpz_class n = abs(q.get_num());
  return s + "\\frac{" + n.get_str() + "}{" + q.get_den().get_str() + "}";
}

}  // namespace

std::string Gaussian::to_string() const {
  if (is_real()) return rat_str(re_);
  std::string im_part = im_.is_one() ? "i" : (-im_).is_one() ? "-i" : rat_str(im_) + "*i";
  if (re_.is_zero()) return im_part;
  std::string s = rat_str(re_);
  if (im_.sign() > 0) s += "+";
  return "(" + s + im_part + ")";
}

// ---------------------------------------------------------------------------
// ParamSpace

ParamSpace::ParamSpace(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == "i") throw DomainError("'i' is reserved for the imaginary unit");
    for (std::size_t j = 0; j < i; ++j)
      if (names_[i] == names_[j]) throw DomainError("duplicate parameter '" + names_[i] + "'");
  }
}

int ParamSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

// ---------------------------------------------------------------------------
// Monomials

namespace {

std::uint32_t degree(const Monom& m) {
  std::uint32_t d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

// -1, 0, 1 under graded lex with variable 0 most significant.
int monom_cmp(const Monom& a, const Monom& b) {
  std::uint32_t da = degree(a), db = degree(b);
  if (da != db) return da < db ? -1 : 1;
  std::size_t i = 0, j = 0;
  for (;;) {
    if (i == a.size() && j == b.size()) return 0;
    if (i == a.size()) return -1;
    if (j == b.size()) return 1;
    if (a[i].first != b[j].first) return a[i].first < b[j].first ? 1 : -1;
    if (a[i].second != b[j].second) return a[i].second < b[j].second ? -1 : 1;
    ++i;
    ++j;
  }
}

Monom monom_mul(const Monom& a, const Monom& b) {
  Monom r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.push_back(b[j++]);
    } else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return r;
}

// a / b if b divides a.
bool monom_div(const Monom& a, const Monom& b, Monom& out) {
  out.clear();
  std::size_t j = 0;
  for (const auto& [v, e] : a) {
    if (j < b.size() && b[j].first < v) return false;
    if (j < b.size() && b[j].first == v) {
      if (b[j].second > e) return false;
      if (b[j].second < e) out.emplace_back(v, e - b[j].second);
      ++j;
    } else {
      out.emplace_back(v, e);
    }
  }
  return j == b.size();
}

std::uint32_t exponent_of(const Monom& m, std::uint32_t v) {
  for (const auto& [var, e] : m)
    if (var == v) return e;
  return 0;
}

Monom without(const Monom& m, std::uint32_t v) {
  Monom r;
  for (const auto& p : m)
    if (p.first != v) r.push_back(p);
  return r;
}

Monom with(const Monom& m, std::uint32_t v, std::uint32_t e) {
  if (e == 0) return m;
  Monom r;
  bool placed = false;
  for (const auto& p : m) {
    if (!placed && p.first > v) {
      r.emplace_back(v, e);
      placed = true;
    }
    r.push_back(p);
  }
  if (!placed) r.emplace_back(v, e);
  return r;
}

}  // namespace

bool Poly::monom_less(const Monom& a, const Monom& b) { return monom_cmp(a, b) < 0; }

// ---------------------------------------------------------------------------
// Poly

Poly Poly::constant(const Gaussian& c) {
  if (c.is_zero()) return Poly{};
  return Poly(Terms{Term{Monom{}, c}});
}

Poly Poly::variable(std::uint32_t var) {
  return Poly(Terms{Term{Monom{{var, 1}}, Gaussian(1)}});
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].monom.empty());
}

bool Poly::is_one() const {
  return terms_.size() == 1 && terms_[0].monom.empty() && terms_[0].coeff.is_one();
}

Gaussian Poly::constant_term() const {
  if (!terms_.empty() && terms_.back().monom.empty()) return terms_.back().coeff;
  return Gaussian{};
}

Poly Poly::from_unsorted(Terms terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return monom_cmp(a.monom, b.monom) > 0; });
  Terms out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().monom == t.monom) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
  return Poly(std::move(out));
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Poly::Terms out;
  out.reserve(a.terms_.size() + b.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms_.size() || j < b.terms_.size()) {
    int c = (i == a.terms_.size())   ? -1
            : (j == b.terms_.size()) ? 1
                                     : monom_cmp(a.terms_[i].monom, b.terms_[j].monom);
    if (c > 0) {
      out.push_back(a.terms_[i++]);
    } else if (c < 0) {
      out.push_back(b.terms_[j++]);
    } else {
      Gaussian s = a.terms_[i].coeff + b.terms_[j].coeff;
      if (!s.is_zero()) out.push_back(Poly::Term{a.terms_[i].monom, std::move(s)});
      ++i;
      ++j;
    }
  }
  return Poly(std::move(out));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly{};
  if (b.is_constant()) return a.scaled(b.terms_[0].coeff);
  if (a.is_constant()) return b.scaled(a.terms_[0].coeff);
  Poly::Terms terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_)
      terms.push_back(Poly::Term{monom_mul(ta.monom, tb.monom), ta.coeff * tb.coeff});
  return Poly::from_unsorted(std::move(terms));
}

Poly Poly::scaled(const Gaussian& c) const {
  if (c.is_zero()) return Poly{};
  if (c.is_one()) return *this;
  Poly r = *this;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

void Poly::add_scaled(const Poly& o, const Gaussian& c) {
  if (o.is_zero() || c.is_zero()) return;
  bool same = terms_.size() == o.terms_.size();
  for (std::size_t i = 0; same && i < terms_.size(); ++i) same = terms_[i].monom == o.terms_[i].monom;
  if (!same) {
    *this = *this + o.scaled(c);
    return;
  }
  bool zeros = false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    terms_[i].coeff.add_product(o.terms_[i].coeff, c);
    zeros = zeros || terms_[i].coeff.is_zero();
  }
  if (zeros)
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                [](const Term& t) { return t.coeff.is_zero(); }),
                 terms_.end());
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].monom != b.terms_[i].monom || !(a.terms_[i].coeff == b.terms_[i].coeff))
      return false;
  return true;
}

Poly Poly::exact_div(const Poly& d) const {
  if (d.is_zero()) throw DomainError("polynomial division by zero");
  if (d.is_constant()) return scaled(Gaussian(1) / d.terms_[0].coeff);
  Poly rem = *this;
  Terms quot;
  const Term& lead = d.terms_.front();
  Monom m;
  while (!rem.is_zero()) {
    const Term& lt = rem.terms_.front();
    if (!monom_div(lt.monom, lead.monom, m))
      throw std::logic_error("Poly::exact_div: divisor does not divide");
    Term t{m, lt.coeff / lead.coeff};
    rem = rem - Poly(Terms{t}) * d;
    quot.push_back(std::move(t));
  }
  return Poly(std::move(quot));  // generated in descending order
}

Poly Poly::monic() const {
  if (is_zero() || leading_coeff().is_one()) return *this;
  return scaled(Gaussian(1) / leading_coeff());
}

Gaussian Poly::eval(std::span<const Gaussian> values) const {
  Gaussian acc;
  for (const auto& t : terms_) {
    Gaussian v = t.coeff;
    for (const auto& [var, e] : t.monom)
      for (std::uint32_t k = 0; k < e; ++k) v *= values[var];
    acc += v;
  }
  return acc;
}

std::uint32_t Poly::var_bound() const {
  std::uint32_t b = 0;
  for (const auto& t : terms_)
    for (const auto& [v, e] : t.monom) b = std::max(b, v + 1);
  return b;
}

// Recursive GCD over Q(i)[x0..xn]: the lowest-index variable present is the
// main variable, coefficients live in the ring of the remaining variables.
struct PolyAccess {
  using Univ = std::vector<Poly>;

  static bool has_var(const Poly& p, std::uint32_t v) {
    for (const auto& t : p.terms_)
      if (exponent_of(t.monom, v) > 0) return true;
    return false;
  }

  static int min_var(const Poly& p) {
    int m = -1;
    for (const auto& t : p.terms_)
      if (!t.monom.empty() && (m < 0 || static_cast<int>(t.monom.front().first) < m))
        m = static_cast<int>(t.monom.front().first);
    return m;
  }

  static Univ to_univ(const Poly& p, std::uint32_t v) {
    Univ coeffs;
    std::vector<Poly::Terms> buckets;
    for (const auto& t : p.terms_) {
      std::uint32_t e = exponent_of(t.monom, v);
      if (buckets.size() <= e) buckets.resize(e + 1);
      buckets[e].push_back(Poly::Term{without(t.monom, v), t.coeff});
    }
    coeffs.reserve(buckets.size());
    for (auto& b : buckets) coeffs.push_back(Poly::from_unsorted(std::move(b)));
    return coeffs;
  }

  static Poly from_univ(const Univ& u, std::uint32_t v) {
    Poly::Terms terms;
    for (std::size_t e = 0; e < u.size(); ++e)
      for (const auto& t : u[e].terms_)
        terms.push_back(Poly::Term{with(t.monom, v, static_cast<std::uint32_t>(e)), t.coeff});
    return Poly::from_unsorted(std::move(terms));
  }

  static void trim(Univ& u) {
    while (!u.empty() && u.back().is_zero()) u.pop_back();
  }

  static Poly content(const Poly& p, std::uint32_t v) {
    Poly g;
    for (const auto& c : to_univ(p, v)) {
      if (c.is_zero()) continue;
      g = Poly::gcd(g, c);
      if (g.is_one()) break;
    }
    return g;
  }

  static Poly prem(const Poly& a, const Poly& b, std::uint32_t v) {
    Univ p = to_univ(a, v);
    Univ q = to_univ(b, v);
    trim(p);
    trim(q);
    const std::size_t dq = q.size() - 1;
    const Poly& lcq = q.back();
    while (!p.empty() && p.size() - 1 >= dq) {
      const std::size_t shift = p.size() - 1 - dq;
      Poly lcp = p.back();
      for (auto& c : p) c = c * lcq;
      for (std::size_t k = 0; k <= dq; ++k) p[k + shift] = p[k + shift] - lcp * q[k];
      trim(p);
    }
    return from_univ(p, v);
  }

  static std::size_t degree_in(const Poly& p, std::uint32_t v) {
    std::size_t d = 0;
    for (const auto& t : p.terms_) d = std::max<std::size_t>(d, exponent_of(t.monom, v));
    return d;
  }
};

Poly Poly::gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly::constant(1);
  int va = PolyAccess::min_var(a), vb = PolyAccess::min_var(b);
  auto v = static_cast<std::uint32_t>(va < 0 ? vb : vb < 0 ? va : std::min(va, vb));
  if (!PolyAccess::has_var(a, v)) return gcd(a, PolyAccess::content(b, v));
  if (!PolyAccess::has_var(b, v)) return gcd(PolyAccess::content(a, v), b);

  Poly ca = PolyAccess::content(a, v);
  Poly cb = PolyAccess::content(b, v);
  Poly gc = gcd(ca, cb);
  Poly p = a.exact_div(ca);
  Poly q = b.exact_div(cb);
  if (PolyAccess::degree_in(p, v) < PolyAccess::degree_in(q, v)) std::swap(p, q);
  for (;;) {
    Poly r = PolyAccess::prem(p, q, v);
    if (r.is_zero()) break;
    if (PolyAccess::degree_in(r, v) == 0) {
      q = Poly::constant(1);
      break;
    }
    p = std::move(q);
    q = r.exact_div(PolyAccess::content(r, v)).monic();
  }
  q = q.exact_div(PolyAccess::content(q, v));
  return (gc * q).monic();
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(ParamSpacePtr space, Poly num, Poly den)
    : space_(std::move(space)), num_(std::move(num)), den_(std::move(den)) {
  canonicalize();
}

Scalar Scalar::rational(long num, long den) {
  if (den == 0) throw DomainError("division by zero");
  return Scalar(Gaussian(Rational(num, den)));
}

Scalar Scalar::param(const ParamSpacePtr& space, std::string_view name) {
  int idx = space ? space->index_of(name) : -1;
  if (idx < 0) throw DomainError("unknown parameter '" + std::string(name) + "'");
  Scalar s;
  s.space_ = space;
  s.num_ = Poly::variable(static_cast<std::uint32_t>(idx));
  return s;
}

void Scalar::canonicalize() {
  if (den_.is_zero()) throw DomainError("division by zero");
  if (num_.is_zero()) {
    den_ = Poly::constant(1);
    return;
  }
  if (den_.is_one()) return;
  if (den_.is_constant()) {
    num_ = num_.scaled(Gaussian(1) / den_.leading_coeff());
    den_ = Poly::constant(1);
    return;
  }
  Poly g = Poly::gcd(num_, den_);
  if (!g.is_one()) {
    num_ = num_.exact_div(g);
    den_ = den_.exact_div(g);
  }
  if (!den_.leading_coeff().is_one()) {
    Gaussian inv = Gaussian(1) / den_.leading_coeff();
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

void Scalar::unify_space(const Scalar& o) {
  if (!o.space_ || o.space_ == space_) return;
  if (!space_) {
    space_ = o.space_;
    return;
  }
  if (!(*space_ == *o.space_))
    throw DomainError("cannot mix scalars from different parameter spaces");
}

Gaussian Scalar::to_constant() const {
  if (!is_constant()) throw DomainError("scalar '" + to_string() + "' is not a constant");
  return num_.is_zero() ? Gaussian{} : num_.leading_coeff();
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.num_ = -r.num_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  unify_space(o);
  if (den_.is_one() && o.den_.is_one()) {
    num_ = num_ + o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ = num_ + o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  canonicalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  unify_space(o);
  if (o.is_constant()) {
    num_ = num_.scaled(o.to_constant());
    if (num_.is_zero()) den_ = Poly::constant(1);
    return *this;
  }
  if (den_.is_one() && o.den_.is_one()) {
    num_ = num_ * o.num_;
    return *this;
  }
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  canonicalize();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw DomainError("division by zero scalar");
  unify_space(o);
  Poly n = num_ * o.den_;
  Poly d = den_ * o.num_;
  num_ = std::move(n);
  den_ = std::move(d);
  canonicalize();
  return *this;
}

Scalar Scalar::scaled(const Gaussian& c) const {
  Scalar r = *this;
  r.num_ = r.num_.scaled(c);
  if (r.num_.is_zero()) r.den_ = Poly::constant(1);
  return r;
}

void Scalar::add_scaled(const Scalar& o, const Gaussian& k) {
  if (o.is_zero() || k.is_zero()) return;
  if (den_.is_one() && o.den_.is_one()) {
    unify_space(o);
    num_.add_scaled(o.num_, k);
    return;
  }
  *this += o.scaled(k);
}

Scalar Scalar::pow(int e) const {
  if (e < 0) return Scalar(1) / pow(-e);
  Scalar r(1);
  r.space_ = space_;
  for (int k = 0; k < e; ++k) r *= *this;
  return r;
}

Scalar Scalar::eval(const std::map<std::string, Gaussian>& bindings) const {
  std::uint32_t nv = std::max(num_.var_bound(), den_.var_bound());
  if (nv == 0) return *this;
  std::vector<Gaussian> values(nv);
  for (std::uint32_t v = 0; v < nv; ++v) {
    const std::string& name = space_->names()[v];
    bool used = false;
    for (const Poly* p : {&num_, &den_})
      for (const auto& t : p->terms())
        if (exponent_of(t.monom, v) > 0) used = true;
    if (!used) continue;
    auto it = bindings.find(name);
    if (it == bindings.end()) throw DomainError("unbound parameter '" + name + "'");
    values[v] = it->second;
  }
  Gaussian d = den_.eval(values);
  if (d.is_zero()) throw DomainError("denominator of '" + to_string() + "' vanishes at binding");
  return Scalar(num_.eval(values) / d);
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string monom_str(const Monom& m, const ParamSpacePtr& space, bool latex) {
  std::string s;
  for (const auto& [v, e] : m) {
    if (!s.empty()) s += latex ? " " : "*";
    s += space ? space->names()[v] : "x" + std::to_string(v);
    if (e > 1) s += latex ? "^{" + std::to_string(e) + "}" : "^" + std::to_string(e);
  }
  return s;
}

std::string poly_str(const Poly& p, const ParamSpacePtr& space, bool latex) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Gaussian c = t.coeff;
    bool neg = false;
    if ((c.is_real() && c.re().sign() < 0) || (c.re().is_zero() && c.im().sign() < 0)) {
      neg = true;
      c = -c;
    }
    std::string mono = monom_str(t.monom, space, latex);
    std::string body;
    const std::string mul = latex ? " " : "*";
    if (c.is_real()) {
      std::string r = latex ? rat_latex(c.re()) : rat_str(c.re());
      body = mono.empty() ? r : (c.is_one() ? mono : r + mul + mono);
    } else if (c.re().is_zero()) {
      std::string r = c.im().is_one() ? "i" : (latex ? rat_latex(c.im()) : rat_str(c.im())) + mul + "i";
      body = mono.empty() ? r : r + mul + mono;
    } else {
      std::string r = latex ? "\\left(" + rat_latex(c.re()) : "(" + rat_str(c.re());
      Rational im = c.im();
      r += im.sign() < 0 ? "-" : "+";
      if (im.sign() < 0) im = -im;
      if (!im.is_one()) r += (latex ? rat_latex(im) : rat_str(im)) + mul;
      r += latex ? "i\\right)" : "i)";
      body = mono.empty() ? r : r + mul + mono;
    }
    if (first) {
      out += neg ? "-" : "";
    } else {
      out += neg ? "-" : "+";
    }
    out += body;
    first = false;
  }
  return out;
}

bool single_power(const Poly& p) {
  return p.terms().size() == 1 && p.terms()[0].coeff.is_one() && p.terms()[0].monom.size() == 1;
}

}  // namespace

std::string Scalar::to_string() const {
  std::string n = poly_str(num_, space_, false);
  if (den_.is_one()) return n;
  if (num_.terms().size() > 1) n = "(" + n + ")";
  std::string d = poly_str(den_, space_, false);
  if (!single_power(den_)) d = "(" + d + ")";
  return n + "/" + d;
}

std::string Scalar::to_latex() const {
  std::string n = poly_str(num_, space_, true);
  if (den_.is_one()) return n;
  return "\\frac{" + n + "}{" + poly_str(den_, space_, true) + "}";
}

bool Scalar::needs_parens() const { return num_.terms().size() > 1; }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ScalarParser {
 public:
  ScalarParser(std::string_view text, const ParamSpacePtr& space) : text_(text), space_(space) {}

  Scalar parse() {
    Scalar s = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, 1, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Scalar expr() {
    Scalar acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Scalar term() {
    Scalar acc = unary();
    for (;;) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        Scalar d = unary();
        if (d.is_zero()) fail("division by zero");
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  Scalar unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Scalar power() {
    Scalar base = atom();
    if (accept('^')) {
      bool neg = accept('-');
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      int e = std::stoi(std::string(text_.substr(start, pos_ - start)));
      if (neg && base.is_zero()) fail("division by zero");
      return base.pow(neg ? -e : e);
    }
    return base;
  }

  Scalar atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of scalar expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Scalar s = expr();
      if (!accept(')')) fail("expected ')'");
      return s;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Scalar(Gaussian(mpq_class(mpz_class(std::string(text_.substr(start, pos_ - start))))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string_view id = text_.substr(start, pos_ - start);
      if (id == "i") return Scalar::imaginary_unit();
      if (!space_ || space_->index_of(id) < 0) {
        pos_ = start;
        fail("unknown parameter '" + std::string(id) + "'");
      }
      return Scalar::param(space_, id);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const ParamSpacePtr& space_;
  std::size_t pos_ = 0;
};

}  // namespace

Scalar parse_scalar(std::string_view text, const ParamSpacePtr& space) {
  return ScalarParser(text, space).parse();
}

mpz_class binomial(long n, long k) {
  if (k < 0) return 0;
  mpz_class r;
  mpz_class nn(n);
  mpz_bin_ui(r.get_mpz_t(), nn.get_mpz_t(), static_cast<unsigned long>(k));
  return r;
}

}  // namespace vope
