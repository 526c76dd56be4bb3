#include "vope/engine.hpp"

#include <algorithm>
#include <string>

#include "vope/error.hpp"

namespace vope {

namespace {

Scalar integer(const mpz_class& z) { return Scalar(Gaussian(mpq_class(z))); }

// C(n, k) without GMP for the small arguments rewriting produces
Scalar binom(long n, long k) {
  if (k < 0) return Scalar(0);
  if (k <= 20 && n >= -40 && n <= 40) {
    long r = 1;
    for (long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return Scalar(r);
  }
  return integer(binomial(n, k));
}

Scalar sign(long e) { return (e % 2 == 0) ? Scalar(1) : Scalar(-1); }

}  // namespace

// Resets the step counter on entry to a public operation.
class Engine::CallGuard {
 public:
  explicit CallGuard(Engine& e) : e_(e) {
    if (e_.depth_++ == 0) {
      e_.steps_ = 0;
      // no cached reference is live outside a call
      if (e_.cached_terms_ > e_.opts_.cache_term_limit) e_.clear_cache();
    }
  }
  ~CallGuard() { --e_.depth_; }
  CallGuard(const CallGuard&) = delete;
  CallGuard& operator=(const CallGuard&) = delete;

 private:
  Engine& e_;
};

Engine::Engine(Algebra alg, EngineOptions opts) : alg_(std::move(alg)), opts_(opts) {}

void Engine::clear_cache() {
  rp_cache_.clear();
  no_cache_.clear();
  d1_cache_.clear();
  cached_terms_ = 0;
}

void Engine::step() {
  if (++steps_ > opts_.step_budget)
    throw BudgetExceeded("rewriting exceeded the step budget of " +
                         std::to_string(opts_.step_budget) +
                         " steps; the OPE table may be inconsistent or not weight-graded");
}

int Engine::product_bound(const NormalForm& a, const NormalForm& b) const {
  if (a.is_zero() || b.is_zero()) return -1000000;
  return alg_.max_weight(a) + alg_.max_weight(b) - 1;
}

// ---------------------------------------------------------------------------
// Public operations

NormalForm Engine::normalize(const FieldExpr& e) {
  CallGuard guard(*this);
  switch (e.kind()) {
    case FieldExpr::Kind::identity:
      return NormalForm::identity();
    case FieldExpr::Kind::generator:
      if (e.gen() >= alg_.size()) throw AlgebraError("expression references an undeclared generator");
      return NormalForm::letter(Letter{e.gen(), 0});
    case FieldExpr::Kind::derivative:
      return deriv_nf(normalize(e.child()), e.order());
    case FieldExpr::Kind::product:
      return residue_product(normalize(e.left()), e.index(), normalize(e.right()));
    case FieldExpr::Kind::sum: {
      NormalForm r;
      for (std::size_t i = 0; i < e.children().size(); ++i)
        r.add_scaled(normalize(e.children()[i]), e.coeffs()[i]);
      return r;
    }
  }
  return {};
}

NormalForm Engine::residue_product(const NormalForm& a, int m, const NormalForm& b) {
  CallGuard guard(*this);
  NormalForm r;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      const NormalForm& p = rp_mono(ma, m, mb);
      if (!p.is_zero()) r.add_scaled(p, ca * cb);
    }
  return r;
}

NormalForm Engine::derivative(const NormalForm& a, int j) {
  CallGuard guard(*this);
  if (j < 0) throw AlgebraError("negative derivative order");
  return deriv_nf(a, j);
}

std::vector<std::pair<int, NormalForm>> Engine::contraction(const NormalForm& a,
                                                            const NormalForm& b) {
  CallGuard guard(*this);
  std::vector<std::pair<int, NormalForm>> out;
  const int bound = product_bound(a, b);
  for (int i = 0; i <= bound; ++i) {
    NormalForm p = residue_product(a, i, b);
    if (!p.is_zero()) out.emplace_back(i, std::move(p));
  }
  return out;
}

int Engine::locality_order(const NormalForm& a, const NormalForm& b) {
  auto c = contraction(a, b);
  return c.empty() ? 0 : c.back().first + 1;
}

NormalForm Engine::skew(const NormalForm& b, int m, const NormalForm& a) {
  CallGuard guard(*this);
  NormalForm r;
  const int bound = product_bound(a, b);
  for (int i = 0; m + i <= bound; ++i) {
    NormalForm p = residue_product(a, m + i, b);
    if (p.is_zero()) continue;
    r.add_scaled(deriv_nf(p, i), sign(m + i + 1));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Monomial-level rules

namespace {

const NormalForm& zero_form() {
  static const NormalForm zero;
  return zero;
}

// out += (a * b) * r without copying a when b is one
void add_times(NormalForm& out, const NormalForm& r, const Scalar& a, const Scalar& b) {
  if (b.is_one())
    out.add_scaled(r, a);
  else
    out.add_scaled(r, a * b);
}

}  // namespace

void Engine::acc_rp_nf_mono(NormalForm& out, const NormalForm& a, int m, const Monomial& b,
                            const Scalar& c) {
  for (const auto& [ma, ca] : a.terms()) {
    const NormalForm& r = rp_mono(ma, m, b);
    if (!r.is_zero()) add_times(out, r, ca, c);
  }
}

void Engine::acc_rp_mono_nf(NormalForm& out, const Monomial& a, int m, const NormalForm& b,
                            const Scalar& c) {
  for (const auto& [mb, cb] : b.terms()) {
    const NormalForm& r = rp_mono(a, m, mb);
    if (!r.is_zero()) add_times(out, r, cb, c);
  }
}

const NormalForm& Engine::rp_mono(const Monomial& a, int m, const Monomial& b) {
  // weight grading: no field of negative weight
  if (alg_.weight(a) + alg_.weight(b) - m - 1 < 0) return zero_form();
  // identity law I_(m) B = delta_{m,-1} B
  if (a.empty() && m != -1) return zero_form();
  if (b.empty() && m >= 0) return zero_form();

  RpKey key{a, m, b};
  if (auto it = rp_cache_.find(key); it != rp_cache_.end()) return it->second;
  step();
  NormalForm r;
  if (a.empty()) {
    r = NormalForm(b);
  } else if (b.empty()) {
    r = deriv_nf(NormalForm(a), -m - 1);
  } else if (a.size() == 1) {
    r = rp_letter(a.front(), m, b);
  } else {
    r = rp_composite(a, m, b);
  }
  cached_terms_ += r.size() + 1;
  return rp_cache_.emplace(std::move(key), std::move(r)).first->second;
}

// (d^(j) G)_(m) = (-1)^j C(m, j) G_(m-j)
NormalForm Engine::rp_letter(const Letter& x, int m, const Monomial& b) {
  Scalar c = binom(m, x.deriv);
  if (c.is_zero()) return {};
  if (x.deriv % 2 == 1) c = -c;
  NormalForm r = rp_gen(x.gen, m - static_cast<int>(x.deriv), b);
  return c.is_one() ? r : c * r;
}

NormalForm Engine::rp_gen(std::uint32_t g, int n, const Monomial& b) {
  NormalForm r;
  // G_(n) for n < 0 is normal ordering with d^(-n-1) G
  if (n < 0) {
    acc_no(r, Letter{g, static_cast<std::uint32_t>(-n - 1)}, b, Scalar(1));
    return r;
  }
  if (b.size() == 1) return gen_letter(g, n, b.front());
  // G_(n) :y N: = :y G_(n)N: + sum_{i=0}^{n} C(n,i) (G_(i) y)_(n-1-i) N
  const Letter y = b.front();
  const Monomial rest = b.rest();
  acc_no_nf(r, y, rp_gen(g, n, rest), Scalar(1));
  for (int i = 0; i <= n; ++i) {
    NormalForm gy = gen_letter(g, i, y);
    if (gy.is_zero()) continue;
    acc_rp_nf_mono(r, gy, n - 1 - i, rest, binom(n, i));
  }
  return r;
}

// G_(n) d^(k) H = sum_{s=0}^{min(k,n)} C(n,s) d^(k-s) (G_(n-s) H), n >= 0
NormalForm Engine::gen_letter(std::uint32_t g, int n, const Letter& y) {
  NormalForm r;
  const int k = static_cast<int>(y.deriv);
  for (int s = 0; s <= std::min(k, n); ++s) {
    const NormalForm& entry = alg_.ope(g, y.gen, n - s);
    if (entry.is_zero()) continue;
    r.add_scaled(deriv_nf(entry, k - s), binom(n, s));
  }
  return r;
}

// (:x N:)_(q) B = sum_{i>=0} x_(-1-i) (N_(q+i) B) + sum_{i>=0} N_(q-1-i) (x_(i) B)
NormalForm Engine::rp_composite(const Monomial& a, int q, const Monomial& b) {
  const Letter x = a.front();
  const Monomial rest = a.rest();
  const int w_rest = alg_.weight(rest);
  const int w_x = alg_.weight(x);
  const int w_b = alg_.weight(b);
  NormalForm r;
  for (int i = 0; q + i <= w_rest + w_b - 1; ++i) {
    const NormalForm& t = rp_mono(rest, q + i, b);
    if (t.is_zero()) continue;
    // x_(-1-i) = C(i+j, i) :d^(i+j) G . :
    const auto j = x.deriv;
    const Letter shifted{x.gen, j + static_cast<std::uint32_t>(i)};
    acc_no_nf(r, shifted, t, binom(i + static_cast<long>(j), i));
  }
  const Monomial single(x);
  for (int i = 0; i <= w_x + w_b - 1; ++i) {
    const NormalForm& t = rp_mono(single, i, b);
    if (t.is_zero()) continue;
    acc_rp_mono_nf(r, rest, q - 1 - i, t, Scalar(1));
  }
  return r;
}

void Engine::acc_no(NormalForm& out, const Letter& x, const Monomial& m, const Scalar& c) {
  if (m.empty()) {
    out.add_term(Monomial(x), c);
  } else if (!letter_less(m.front(), x)) {
    out.add_term(m.prepend(x), c);
  } else {
    out.add_scaled(no_letter(x, m), c);
  }
}

void Engine::acc_no_nf(NormalForm& out, const Letter& x, const NormalForm& nf, const Scalar& c) {
  const bool unit = c.is_one();
  for (const auto& [m, v] : nf.terms()) {
    if (unit)
      acc_no(out, x, m, v);
    else
      acc_no(out, x, m, v * c);
  }
}

// :x :y N:: = :y :x N:: + sum_{i>=0} (-1)^i (x_(i) y)_(-2-i) N   for y < x
const NormalForm& Engine::no_letter(const Letter& x, const Monomial& m) {
  NoKey key{x, m};
  if (auto it = no_cache_.find(key); it != no_cache_.end()) return it->second;
  step();
  const Letter y = m.front();
  const Monomial rest = m.rest();
  NormalForm inner;
  acc_no(inner, x, rest, Scalar(1));
  NormalForm r;
  acc_no_nf(r, y, inner, Scalar(1));
  const Monomial mx(x), my(y);
  const int bound = alg_.weight(x) + alg_.weight(y) - 1;
  for (int i = 0; i <= bound; ++i) {
    const NormalForm& xy = rp_mono(mx, i, my);
    if (xy.is_zero()) continue;
    acc_rp_nf_mono(r, xy, -2 - i, rest, sign(i));
  }
  cached_terms_ += r.size() + 1;
  return no_cache_.emplace(std::move(key), std::move(r)).first->second;
}

// d :x N: = :(dx) N: + :x dN:
const NormalForm& Engine::deriv1_mono(const Monomial& m) {
  if (m.empty()) return zero_form();
  if (auto it = d1_cache_.find(m); it != d1_cache_.end()) return it->second;
  step();
  const Letter x = m.front();
  const Monomial rest = m.rest();
  NormalForm r;
  acc_no(r, Letter{x.gen, x.deriv + 1}, rest, Scalar(static_cast<long>(x.deriv) + 1));
  if (!rest.empty()) acc_no_nf(r, x, deriv1_mono(rest), Scalar(1));
  cached_terms_ += r.size() + 1;
  return d1_cache_.emplace(m, std::move(r)).first->second;
}

NormalForm Engine::deriv1_nf(const NormalForm& nf) {
  NormalForm r;
  for (const auto& [m, c] : nf.terms()) r.add_scaled(deriv1_mono(m), c);
  return r;
}

NormalForm Engine::deriv_nf(const NormalForm& nf, int j) {
  if (j == 0 || nf.is_zero()) return nf;
  NormalForm r = nf;
  mpz_class fact = 1;
  for (int k = 1; k <= j; ++k) {
    r = deriv1_nf(r);
    fact *= k;
  }
  return Scalar(Gaussian(mpq_class(1, 1) / mpq_class(fact))) * r;
}

}  // namespace vope
