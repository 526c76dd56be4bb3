#include "vope/borcherds.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "vope/error.hpp"

namespace vope {

namespace {

Scalar integer(const mpz_class& z) { return Scalar(Gaussian(mpq_class(z))); }

bool odd(long n) { return n % 2 != 0; }

}  // namespace

namespace {

// Evaluates both sides for many (p,q,r) on one triple, sharing the inner
// products a_(n)b, b_(n)c, a_(n)c and the outer products built from them.
class SidesEvaluator {
 public:
  SidesEvaluator(Engine& eng, const NormalForm& a, const NormalForm& b, const NormalForm& c)
      : eng_(eng), a_(a), b_(b), c_(c) {}

  BorcherdsSides operator()(int p, int q, int r) {
    BorcherdsSides s;
    if (a_.is_zero() || b_.is_zero() || c_.is_zero()) return s;

    // lhs: a_(r+i) b vanishes once r+i exceeds the grading bound
    int top = eng_.product_bound(a_, b_) - r;
    if (p >= 0) top = std::min(top, p);
    for (int i = 0; i <= top; ++i) {
      const NormalForm& v = outer(ab_c_, ab_, a_, b_, c_, r + i, p + q - i, true);
      if (!v.is_zero()) s.lhs.add_scaled(v, integer(binomial(p, i)));
    }

    int top1 = eng_.product_bound(b_, c_) - q;
    if (r >= 0) top1 = std::min(top1, r);
    for (int i = 0; i <= top1; ++i) {
      const NormalForm& v = outer(a_bc_, bc_, b_, c_, a_, q + i, p + r - i, false);
      if (v.is_zero()) continue;
      mpz_class k = binomial(r, i);
      if (odd(i)) k = -k;
      s.rhs.add_scaled(v, integer(k));
    }
    int top2 = eng_.product_bound(a_, c_) - p;
    if (r >= 0) top2 = std::min(top2, r);
    for (int i = 0; i <= top2; ++i) {
      const NormalForm& v = outer(b_ac_, ac_, a_, c_, b_, p + i, q + r - i, false);
      if (v.is_zero()) continue;
      mpz_class k = binomial(r, i);
      if (odd(i) == odd(r)) k = -k;
      s.rhs.add_scaled(v, integer(k));
    }
    return s;
  }

 private:
  using Inner = std::map<int, NormalForm>;
  using Outer = std::map<std::pair<int, int>, NormalForm>;

  // inner = x_(n) y; result (inner)_(k) z when `left`, else z_(k) (inner)
  const NormalForm& outer(Outer& cache, Inner& inner_cache, const NormalForm& x,
                          const NormalForm& y, const NormalForm& z, int n, int k, bool left) {
    auto key = std::make_pair(n, k);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    auto in = inner_cache.find(n);
    if (in == inner_cache.end()) in = inner_cache.emplace(n, eng_.residue_product(x, n, y)).first;
    const NormalForm& v = in->second;
    NormalForm r;
    if (!v.is_zero()) r = left ? eng_.residue_product(v, k, z) : eng_.residue_product(z, k, v);
    return cache.emplace(key, std::move(r)).first->second;
  }

  Engine& eng_;
  const NormalForm& a_;
  const NormalForm& b_;
  const NormalForm& c_;
  Inner ab_, bc_, ac_;
  Outer ab_c_, a_bc_, b_ac_;
};

}  // namespace

BorcherdsSides borcherds_sides(Engine& eng, const NormalForm& a, const NormalForm& b,
                               const NormalForm& c, int p, int q, int r) {
  return SidesEvaluator(eng, a, b, c)(p, q, r);
}

BorcherdsReport check_borcherds(Engine& eng, const NormalForm& a, const NormalForm& b,
                                const NormalForm& c, const Window& w) {
  BorcherdsReport rep;
  SidesEvaluator sides(eng, a, b, c);
  for (int p = w.p_lo; p <= w.p_hi; ++p)
    for (int q = w.q_lo; q <= w.q_hi; ++q)
      for (int r = w.r_lo; r <= w.r_hi; ++r) {
        BorcherdsSides s = sides(p, q, r);
        ++rep.checked;
        if (p >= 0 && r >= 0) ++rep.checked_classical;
        if (!(s.lhs == s.rhs)) rep.violations.push_back({p, q, r, std::move(s)});
      }
  return rep;
}

ConsistencyReport check_algebra_consistency(const Algebra& alg, int weight_cutoff,
                                            EngineOptions opts) {
  int max_w = 0;
  for (const auto& g : alg.generators()) max_w = std::max(max_w, g.weight);
  if (weight_cutoff < max_w)
    throw AlgebraError("weight cutoff " + std::to_string(weight_cutoff) +
                       " is below the largest generator weight " + std::to_string(max_w));

  ConsistencyReport rep;
  Engine eng(alg, opts);
  const auto n = static_cast<std::uint32_t>(alg.size());
  auto field = [](std::uint32_t g) { return NormalForm::letter(Letter{g, 0}); };

  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      const int top = alg.weight(a) + alg.weight(b) - 1;
      for (int m = 0; m <= top; ++m) {
        ++rep.checked;
        try {
          NormalForm expected = eng.skew(field(b), m, field(a));
          const NormalForm& stored = alg.ope(b, a, m);
          if (!(expected == stored)) rep.skew.push_back({a, b, m, stored, expected});
        } catch (const BudgetExceeded& e) {
          rep.aborted.push_back("skew (" + alg.name(a) + "," + alg.name(b) + "," +
                                std::to_string(m) + "): " + e.what());
        }
      }
    }

  const Window w = Window::cube(-1, weight_cutoff - 1);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c) {
        try {
          BorcherdsReport r = check_borcherds(eng, field(a), field(b), field(c), w);
          rep.checked += r.checked;
          for (auto& v : r.violations) rep.borcherds.push_back({a, b, c, std::move(v)});
        } catch (const BudgetExceeded& e) {
          rep.aborted.push_back("Borcherds (" + alg.name(a) + "," + alg.name(b) + "," +
                                alg.name(c) + "): " + e.what());
        }
      }
  return rep;
}

}  // namespace vope
