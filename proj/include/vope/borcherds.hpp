#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vope/engine.hpp"

namespace vope {

struct BorcherdsSides {
  NormalForm lhs;
  NormalForm rhs;
};

/// Both sides of the Borcherds identity
///   sum_i C(p,i) (a_(r+i) b)_(p+q-i) c
///     = sum_i (-1)^i C(r,i) [a_(p+r-i)(b_(q+i) c) - (-1)^r b_(q+r-i)(a_(p+i) c)]
/// with the sums cut off where the weight grading forces zero.
BorcherdsSides borcherds_sides(Engine& eng, const NormalForm& a, const NormalForm& b,
                               const NormalForm& c, int p, int q, int r);

/// Inclusive ranges of p, q, r.
struct Window {
  int p_lo = -2, p_hi = 3;
  int q_lo = -2, q_hi = 3;
  int r_lo = -2, r_hi = 3;

  static Window cube(int lo, int hi) { return {lo, hi, lo, hi, lo, hi}; }
};

struct BorcherdsViolation {
  int p, q, r;
  BorcherdsSides sides;
  /// p, r >= 0: the range where the identity holds without locality.
  bool classical() const { return p >= 0 && r >= 0; }
};

struct BorcherdsReport {
  std::vector<BorcherdsViolation> violations;
  std::size_t checked = 0;
  /// How many checked (p,q,r) had p, r >= 0.
  std::size_t checked_classical = 0;

  bool ok() const { return violations.empty(); }
};

BorcherdsReport check_borcherds(Engine& eng, const NormalForm& a, const NormalForm& b,
                                const NormalForm& c, const Window& w);

struct SkewViolation {
  std::uint32_t left, right;  ///< table(right, left, m) disagrees with skew of table(left, right)
  int m;
  NormalForm table_value;
  NormalForm skew_value;
};

struct TripleViolation {
  std::uint32_t a, b, c;
  BorcherdsViolation v;
};

struct ConsistencyReport {
  std::vector<SkewViolation> skew;
  std::vector<TripleViolation> borcherds;
  /// Set when rewriting ran out of budget; the table is then reported as
  /// inconsistent.
  std::vector<std::string> aborted;
  std::size_t checked = 0;

  bool ok() const { return skew.empty() && borcherds.empty() && aborted.empty(); }
};

/// Checks skew symmetry on every generator pair and the Borcherds identity
/// on every generator triple for p, q, r in [-1, weight_cutoff - 1].
/// Throws AlgebraError when weight_cutoff is below the largest generator
/// weight.
ConsistencyReport check_algebra_consistency(const Algebra& alg, int weight_cutoff,
                                            EngineOptions opts = {});

}  // namespace vope
