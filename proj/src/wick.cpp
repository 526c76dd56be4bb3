#include "vope/wick.hpp"

#include <string>

#include "vope/error.hpp"

namespace vope {

namespace {

Scalar integer(const mpz_class& z) { return Scalar(Gaussian(mpq_class(z))); }

// coeff * (z-x)^{-m} (x-w)^{-n} (z-w)^{-l} * field(w)
struct Integrand {
  Scalar coeff;
  int m;
  int n;
  int l;
  NormalForm field;
};

// Res_{x=w} of the integrand, expanded in |x-w| < |z-w|. Terms regular in
// (z - w) are dropped.
void integrate(const Integrand& t, SingularSeries& out) {
  if (t.field.is_zero() || t.coeff.is_zero() || t.n <= 0) return;
  Scalar c;
  int pole;
  if (t.m >= 1) {
    auto k = contour_kernel(t.m, t.n);
    c = k.coeff;
    pole = k.pole;
  } else {
    // (z-x)^k = sum_s C(k,s) (z-w)^{k-s} (-(x-w))^s; the residue picks s = n-1
    const int k = -t.m;
    mpz_class b = binomial(k, t.n - 1);
    if (b == 0) return;
    if ((t.n - 1) % 2 == 1) b = -b;
    c = integer(b);
    pole = t.n - 1 - k;
  }
  pole += t.l;
  if (pole >= 1) out.add(pole, t.field, c * t.coeff);
}

// Full OPE X(x) Y(w) = sum_j (x-w)^{-j-1} (X_(j)Y)(w), keeping only terms
// with j >= lowest; the negative-j part is the Taylor expansion of the
// normally ordered product.
std::vector<std::pair<int, NormalForm>> full_ope(Engine& eng, const NormalForm& x,
                                                 const NormalForm& y, int lowest) {
  std::vector<std::pair<int, NormalForm>> out;
  const int top = eng.product_bound(x, y);
  for (int j = lowest; j <= top; ++j) {
    NormalForm p = eng.residue_product(x, j, y);
    if (!p.is_zero()) out.emplace_back(j, std::move(p));
  }
  return out;
}

}  // namespace

SingularSeries SingularSeries::from_contraction(
    const std::vector<std::pair<int, NormalForm>>& c) {
  SingularSeries s;
  for (const auto& [i, v] : c) s.add(i + 1, v);
  return s;
}

NormalForm SingularSeries::at(int n) const {
  auto it = poles_.find(n);
  return it == poles_.end() ? NormalForm{} : it->second;
}

void SingularSeries::add(int n, const NormalForm& v, const Scalar& c) {
  if (n < 1) throw DomainError("pole order must be positive");
  auto& slot = poles_[n];
  slot.add_scaled(v, c);
  if (slot.is_zero()) poles_.erase(n);
}

KernelValue contour_kernel(int m, int n) {
  if (m < 1 || n < 1)
    throw DomainError("contour kernel needs m, n >= 1, got m=" + std::to_string(m) +
                      ", n=" + std::to_string(n));
  return {integer(binomial(m + n - 2, n - 1)), m + n - 1};
}

// (1/2 pi i) oint dx/(x-w) { [A(z)B(x)] C(w) + B(x) [A(z)C(w)] }
SingularSeries wick_left(Engine& eng, const NormalForm& a, const NormalForm& b,
                         const NormalForm& c) {
  SingularSeries out;
  // the extra 1/(x-w) leaves only j >= -1 with a residue
  for (const auto& [i, ab] : eng.contraction(a, b))
    for (const auto& [j, v] : full_ope(eng, ab, c, -1))
      integrate({Scalar(1), i + 1, j + 2, 0, v}, out);
  for (const auto& [k, ac] : eng.contraction(a, c))
    for (const auto& [j, v] : full_ope(eng, b, ac, -1))
      integrate({Scalar(1), 0, j + 2, k + 1, v}, out);
  return out;
}

// (1/2 pi i) oint dx/(z-x) { :A(x) [B(x)C(w)]: + R(B(x) [A(x)C(w)]) }
SingularSeries wick_right(Engine& eng, const NormalForm& a, const NormalForm& b,
                          const NormalForm& c) {
  SingularSeries out;
  for (const auto& [i, bc] : eng.contraction(b, c)) {
    // Taylor terms (x-w)^s with s > i are regular in x and integrate to zero
    for (int s = 0; s <= i; ++s) {
      NormalForm v = eng.residue_product(a, -s - 1, bc);
      integrate({Scalar(1), 1, i + 1 - s, 0, v}, out);
    }
  }
  for (const auto& [i, ac] : eng.contraction(a, c))
    for (const auto& [j, v] : full_ope(eng, b, ac, -i - 1))
      integrate({Scalar(1), 1, i + j + 2, 0, v}, out);
  return out;
}

OpeDisplay render_ope(Engine& eng, const NormalForm& a, const NormalForm& b) {
  return {SingularSeries::from_contraction(eng.contraction(a, b)), a, b};
}

}  // namespace vope
