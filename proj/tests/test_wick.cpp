#include "doctest.h"
#include "support/partial_fractions.hpp"
#include "vope/error.hpp"
#include "vope/wick.hpp"

using namespace vope;

namespace {

NormalForm letter(std::uint32_t g, std::uint32_t d = 0) { return NormalForm::letter(Letter{g, d}); }

}  // namespace

TEST_CASE("contour kernel against partial fractions") {
  for (int m = 1; m <= 6; ++m)
    for (int n = 1; n <= 6; ++n) {
      const KernelValue k = contour_kernel(m, n);
      CHECK(k.pole == m + n - 1);
      // the residue is coeff * u^(-pole); probe two values of u
      for (long u : {1L, 2L}) {
        mpq_class expected = k.coeff.to_constant().re().to_mpq();
        for (int j = 0; j < k.pole; ++j) expected /= u;
        CHECK(testing::residue_by_partial_fractions(m, n, mpq_class(u)) == expected);
      }
    }
  CHECK_THROWS_AS(contour_kernel(0, 2), DomainError);
  CHECK_THROWS_AS(contour_kernel(2, -1), DomainError);
}

TEST_CASE("Wick theorems agree with direct contractions") {
  for (const Algebra& alg : {preset_virasoro(), preset_su2()}) {
    Engine eng(alg);
    std::vector<NormalForm> pool;
    for (std::uint32_t g = 0; g < alg.size(); ++g) {
      pool.push_back(letter(g));
      pool.push_back(letter(g, 1));
    }
    pool.push_back(eng.nop(letter(0), letter(0)));
    if (alg.size() > 1) pool.push_back(eng.nop(letter(0), letter(1)));
    for (const auto& a : pool)
      for (const auto& b : pool)
        for (const auto& c : pool) {
          CHECK(wick_left(eng, a, b, c) ==
                SingularSeries::from_contraction(eng.contraction(a, eng.nop(b, c))));
          CHECK(wick_right(eng, a, b, c) ==
                SingularSeries::from_contraction(eng.contraction(eng.nop(a, b), c)));
        }
  }
}

TEST_CASE("(TT)(z) T(w)") {
  Engine eng(preset_virasoro());
  const Scalar c = Scalar::param(eng.algebra().params(), "c");
  const NormalForm t = letter(0), tt = eng.nop(t, t);
  SingularSeries expected;
  expected.add(6, NormalForm::identity(3 * c));
  expected.add(4, t, c + Scalar(8));
  expected.add(3, letter(0, 1), c + Scalar(5));
  expected.add(2, Scalar(4) * tt + (Scalar(1) + c / 2) * Scalar(2) * letter(0, 2));
  expected.add(1, (c - Scalar(1)) * letter(0, 3) + Scalar(3) * eng.derivative(tt));
  CHECK(wick_right(eng, t, t, t) == expected);
  CHECK(SingularSeries::from_contraction(eng.contraction(tt, t)) == expected);
}

TEST_CASE("OPE display") {
  Engine eng(preset_virasoro());
  OpeDisplay d = render_ope(eng, letter(0), letter(0));
  CHECK(d.singular.max_pole() == 4);
  CHECK(d.singular.at(2) == 2 * letter(0));
  CHECK(d.singular.at(5).is_zero());
}
