#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

namespace vope::testing {

// Residue at x = w of 1/((z-x)^m (x-w)^n), with t = x - w and u = z - w:
// solve 1 = sum_k A_k t^(n-k) (u-t)^m + sum_l B_l t^n (u-t)^(m-l) for the
// partial-fraction coefficients and return A_1.
inline mpq_class residue_by_partial_fractions(int m, int n, const mpq_class& u) {
  const int size = m + n;  // unknowns A_1..A_n, B_1..B_m; polynomial degree < m + n
  auto poly_times = [](const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
    std::vector<mpq_class> r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
  };
  auto power = [&](std::vector<mpq_class> base, int e) {
    std::vector<mpq_class> r{1};
    for (int i = 0; i < e; ++i) r = poly_times(r, base);
    return r;
  };
  const std::vector<mpq_class> u_minus_t{u, -1};
  const std::vector<mpq_class> t{0, 1};

  std::vector<std::vector<mpq_class>> mat(size, std::vector<mpq_class>(size + 1));
  for (int k = 1; k <= n; ++k) {
    auto col = poly_times(power(t, n - k), power(u_minus_t, m));
    for (std::size_t d = 0; d < col.size() && d < static_cast<std::size_t>(size); ++d) mat[d][k - 1] = col[d];
  }
  for (int l = 1; l <= m; ++l) {
    auto col = poly_times(power(t, n), power(u_minus_t, m - l));
    for (std::size_t d = 0; d < col.size() && d < static_cast<std::size_t>(size); ++d) mat[d][n + l - 1] = col[d];
  }
  mat[0][size] = 1;

  for (int c = 0; c < size; ++c) {
    int p = c;
    while (mat[p][c] == 0) ++p;
    std::swap(mat[p], mat[c]);
    for (int r = 0; r < size; ++r) {
      if (r == c || mat[r][c] == 0) continue;
      const mpq_class f = mat[r][c] / mat[c][c];
      for (int j = c; j <= size; ++j) mat[r][j] -= f * mat[c][j];
    }
  }
  return mat[0][size] / mat[0][0];
}

}  // namespace vope::testing
