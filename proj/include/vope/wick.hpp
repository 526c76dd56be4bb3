#pragma once

#include <map>
#include <utility>
#include <vector>

#include "vope/engine.hpp"
#include "vope/normal_form.hpp"

namespace vope {

/// Singular part of an OPE in (z - w): pole order n >= 1 maps to the
/// coefficient field at w of (z - w)^{-n}.
class SingularSeries {
 public:
  SingularSeries() = default;
  /// From a contraction list (i, a_(i)b): pole i + 1.
  static SingularSeries from_contraction(const std::vector<std::pair<int, NormalForm>>& c);

  const std::map<int, NormalForm>& poles() const { return poles_; }
  bool empty() const { return poles_.empty(); }
  /// Coefficient of (z - w)^{-n}; zero when absent.
  NormalForm at(int n) const;
  int max_pole() const { return poles_.empty() ? 0 : poles_.rbegin()->first; }

  /// Adds c * v to the coefficient of pole n (n >= 1).
  void add(int n, const NormalForm& v, const Scalar& c = Scalar(1));

  friend bool operator==(const SingularSeries&, const SingularSeries&) = default;

 private:
  std::map<int, NormalForm> poles_;
};

struct KernelValue {
  Scalar coeff;
  int pole = 0;
};

/// Res_{x=w} (z-x)^{-m} (x-w)^{-n} expanded in |x-w| < |z-w|:
/// C(m+n-2, n-1) (z-w)^{-(m+n-1)}. Throws DomainError unless m, n >= 1.
KernelValue contour_kernel(int m, int n);

/// Contraction of A(z) with (BC)(w) by the first Wick theorem.
SingularSeries wick_left(Engine& eng, const NormalForm& a, const NormalForm& b,
                         const NormalForm& c);

/// Contraction of (AB)(z) with C(w) by the second Wick theorem.
SingularSeries wick_right(Engine& eng, const NormalForm& a, const NormalForm& b,
                          const NormalForm& c);

/// Full OPE for display: the contraction plus the regular part :A(z)B(w):,
/// kept symbolic.
struct OpeDisplay {
  SingularSeries singular;
  NormalForm left;
  NormalForm right;
};

OpeDisplay render_ope(Engine& eng, const NormalForm& a, const NormalForm& b);

}  // namespace vope
