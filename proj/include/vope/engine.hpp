#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vope/algebra.hpp"
#include "vope/expr.hpp"
#include "vope/normal_form.hpp"

namespace vope {

struct EngineOptions {
  /// Maximum number of rewrite steps (cache misses of the monomial-level
  /// rules) per top-level call before BudgetExceeded is thrown.
  std::uint64_t step_budget = 1'000'000;
  /// The memo caches are dropped at the start of a top-level call once they
  /// hold more normal-form terms than this.
  std::size_t cache_term_limit = 4'000'000;
};

/// Rewrites field expressions to normal form and evaluates residue products
/// over one algebra.
///
/// All results are functions of the algebra only; the engine memoizes
/// monomial-level products internally. An Engine is not thread-safe: use one
/// instance per thread.
class Engine {
 public:
  explicit Engine(Algebra alg, EngineOptions opts = {});

  const Algebra& algebra() const { return alg_; }
  const EngineOptions& options() const { return opts_; }
  void set_step_budget(std::uint64_t budget) { opts_.step_budget = budget; }

  NormalForm normalize(const FieldExpr& e);
  /// a_(m) b, bilinear.
  NormalForm residue_product(const NormalForm& a, int m, const NormalForm& b);
  /// :a b: = a_(-1) b.
  NormalForm nop(const NormalForm& a, const NormalForm& b) { return residue_product(a, -1, b); }
  /// The divided-power derivative of order j >= 0.
  NormalForm derivative(const NormalForm& a, int j = 1);
  /// Nonzero a_(i) b for i >= 0, ascending in i.
  std::vector<std::pair<int, NormalForm>> contraction(const NormalForm& a, const NormalForm& b);
  /// 1 + max{i : a_(i) b != 0}, or 0 when the contraction is empty.
  int locality_order(const NormalForm& a, const NormalForm& b);
  /// sum_{i>=0} (-1)^{m+i+1} d^(i) (a_(m+i) b); equals b_(m) a.
  NormalForm skew(const NormalForm& b, int m, const NormalForm& a);

  /// Largest n for which a_(n) b can be nonzero (weight grading).
  int product_bound(const NormalForm& a, const NormalForm& b) const;

  std::uint64_t steps_used() const { return steps_; }
  /// Total terms held by the memo caches.
  std::size_t cached_terms() const { return cached_terms_; }
  void clear_cache();

 private:
  struct RpKey {
    Monomial a;
    int m;
    Monomial b;
    friend bool operator==(const RpKey&, const RpKey&) = default;
  };
  struct RpKeyHash {
    std::size_t operator()(const RpKey& k) const {
      return hash_mix(hash_mix(k.a.hash(), static_cast<std::size_t>(k.m + 1024)), k.b.hash());
    }
  };
  struct NoKey {
    Letter x;
    Monomial m;
    friend bool operator==(const NoKey&, const NoKey&) = default;
  };
  struct NoKeyHash {
    std::size_t operator()(const NoKey& k) const {
      return hash_mix(k.m.hash(), (static_cast<std::size_t>(k.x.gen) << 32) | k.x.deriv);
    }
  };

  class CallGuard;

  void step();
  // Cached results are returned by reference; unordered_map keeps element
  // references valid across rehashing and nothing is ever erased.
  const NormalForm& rp_mono(const Monomial& a, int m, const Monomial& b);
  NormalForm rp_letter(const Letter& x, int m, const Monomial& b);
  NormalForm rp_gen(std::uint32_t g, int n, const Monomial& b);
  NormalForm gen_letter(std::uint32_t g, int n, const Letter& y);
  NormalForm rp_composite(const Monomial& a, int q, const Monomial& b);
  // out += c * (a_(m) b)
  void acc_rp_nf_mono(NormalForm& out, const NormalForm& a, int m, const Monomial& b,
                      const Scalar& c);
  void acc_rp_mono_nf(NormalForm& out, const Monomial& a, int m, const NormalForm& b,
                      const Scalar& c);
  // out += c * :x m:
  void acc_no(NormalForm& out, const Letter& x, const Monomial& m, const Scalar& c);
  void acc_no_nf(NormalForm& out, const Letter& x, const NormalForm& nf, const Scalar& c);
  const NormalForm& no_letter(const Letter& x, const Monomial& m);
  const NormalForm& deriv1_mono(const Monomial& m);
  NormalForm deriv1_nf(const NormalForm& nf);
  NormalForm deriv_nf(const NormalForm& nf, int j);

  Algebra alg_;
  EngineOptions opts_;
  std::uint64_t steps_ = 0;
  int depth_ = 0;
  std::size_t cached_terms_ = 0;
  std::unordered_map<RpKey, NormalForm, RpKeyHash> rp_cache_;
  std::unordered_map<NoKey, NormalForm, NoKeyHash> no_cache_;
  std::unordered_map<Monomial, NormalForm, MonomialHash> d1_cache_;
};

}  // namespace vope
