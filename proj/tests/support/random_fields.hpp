#pragma once

#include <algorithm>
#include <array>
#include <random>
#include <vector>

#include "vope/algebra.hpp"
#include "vope/normal_form.hpp"

namespace vope::testing {

/// Every standard monomial of weight exactly `w`.
inline std::vector<Monomial> monomials_of_weight(const Algebra& alg, int w) {
  std::vector<Letter> letters;
  for (std::uint32_t g = 0; g < alg.size(); ++g)
    for (int d = 0; alg.weight(g) + d <= w; ++d) letters.push_back({g, static_cast<std::uint32_t>(d)});
  std::sort(letters.begin(), letters.end(), letter_less);

  std::vector<Monomial> out;
  std::vector<Letter> cur;
  auto rec = [&](auto& self, std::size_t from, int left) -> void {
    if (left == 0) {
      out.emplace_back(cur);
      return;
    }
    for (std::size_t i = from; i < letters.size(); ++i) {
      const int lw = alg.weight(letters[i]);
      if (lw > left) continue;
      cur.push_back(letters[i]);
      self(self, i, left - lw);
      cur.pop_back();
    }
  };
  rec(rec, 0, w);
  return out;
}

/// Random homogeneous element: 1 to 3 standard monomials of one weight in
/// [1, max_weight] (among weights that have monomials) with small nonzero integer coefficients.
class FieldSampler {
 public:
  FieldSampler(const Algebra& alg, int max_weight, unsigned seed)
      : alg_(alg), rng_(seed) {
    for (int w = 1; w <= max_weight; ++w) {
      auto pool = monomials_of_weight(alg, w);
      if (!pool.empty()) {
        by_weight_.push_back(std::move(pool));
        weights_.push_back(w);
      }
    }
  }

  NormalForm operator()() {
    std::uniform_int_distribution<std::size_t> wdist(0, by_weight_.size() - 1);
    return sample(wdist(rng_));
  }

  /// Three elements with uniformly drawn weights, redrawn until they sum to
  /// at most max_total.
  std::array<NormalForm, 3> triple(int max_total) {
    std::uniform_int_distribution<std::size_t> wdist(0, by_weight_.size() - 1);
    std::size_t i, j, k;
    do {
      i = wdist(rng_);
      j = wdist(rng_);
      k = wdist(rng_);
    } while (weights_[i] + weights_[j] + weights_[k] > max_total);
    return {sample(i), sample(j), sample(k)};
  }

  std::mt19937& rng() { return rng_; }

 private:
  NormalForm sample(std::size_t slot) {
    const auto& pool = by_weight_[slot];
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> nterms(1, 3);
    std::uniform_int_distribution<int> coeff(-3, 3);
    NormalForm out;
    const int n = nterms(rng_);
    for (int t = 0; t < n; ++t) {
      int c = 0;
      while (c == 0) c = coeff(rng_);
      out.add_term(pool[pick(rng_)], Scalar(c));
    }
    return out.is_zero() ? NormalForm(pool.front()) : out;
  }

  const Algebra& alg_;
  std::mt19937 rng_;
  std::vector<std::vector<Monomial>> by_weight_;
  std::vector<int> weights_;
};

}  // namespace vope::testing
