#include "vope/normal_form.hpp"

#include <algorithm>
#include <cassert>

namespace vope {

Monomial::Monomial(Letters letters) : letters_(std::move(letters)) {
  assert(std::is_sorted(letters_.begin(), letters_.end(), letter_less));
}

Monomial Monomial::rest() const {
  Monomial r;
  r.letters_.assign(letters_.begin() + 1, letters_.end());
  return r;
}

Monomial Monomial::prepend(Letter x) const {
  assert(letters_.empty() || !letter_less(letters_.front(), x));
  Monomial r;
  r.letters_.reserve(letters_.size() + 1);
  r.letters_.push_back(x);
  r.letters_.insert(r.letters_.end(), letters_.begin(), letters_.end());
  return r;
}

bool operator<(const Monomial& a, const Monomial& b) {
  return std::lexicographical_compare(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                      b.letters_.end(), letter_less);
}

std::size_t Monomial::hash() const {
  std::size_t h = letters_.size();
  for (const auto& x : letters_)
    h = hash_mix(h, (static_cast<std::size_t>(x.gen) << 32) | x.deriv);
  return h;
}

NormalForm::NormalForm(const Monomial& m, Scalar c) {
  if (!c.is_zero()) terms_.emplace(m, std::move(c));
}

Scalar NormalForm::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar(0) : it->second;
}

void NormalForm::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void NormalForm::add_scaled(const NormalForm& other, const Scalar& c) {
  if (c.is_zero()) return;
  if (c.is_one()) {
    *this += other;
    return;
  }
  if (!c.is_constant()) {
    for (const auto& [m, v] : other.terms_) add_term(m, v * c);
    return;
  }
  add_constant_multiple(other, c.to_constant());
}

void NormalForm::add_constant_multiple(const NormalForm& other, const Gaussian& k) {
  auto hint = terms_.begin();
  for (const auto& [m, v] : other.terms_) {
    // both maps are sorted, so the next slot is usually a few steps ahead
    int steps = 0;
    while (hint != terms_.end() && hint->first < m && ++steps <= 4) ++hint;
    if (steps > 4) hint = terms_.lower_bound(m);
    if (hint != terms_.end() && hint->first == m) {
      hint->second.add_scaled(v, k);
      if (hint->second.is_zero()) hint = terms_.erase(hint);
    } else {
      hint = terms_.emplace_hint(hint, m, k.is_one() ? v : v.scaled(k));
    }
  }
}

NormalForm& NormalForm::operator+=(const NormalForm& o) {
  add_constant_multiple(o, Gaussian(1));
  return *this;
}

NormalForm& NormalForm::operator-=(const NormalForm& o) {
  for (const auto& [m, v] : o.terms_) add_term(m, -v);
  return *this;
}

NormalForm NormalForm::operator-() const {
  NormalForm r = *this;
  for (auto& [m, v] : r.terms_) v = -v;
  return r;
}

NormalForm operator*(const Scalar& c, const NormalForm& a) {
  NormalForm r;
  r.add_scaled(a, c);
  return r;
}

bool operator==(const NormalForm& a, const NormalForm& b) { return a.terms_ == b.terms_; }

NormalForm NormalForm::map_coeffs(const std::function<Scalar(const Scalar&)>& f) const {
  NormalForm r;
  for (const auto& [m, v] : terms_) r.add_term(m, f(v));
  return r;
}

}  // namespace vope
