#include "doctest.h"
#include "support/random_fields.hpp"
#include "vope/engine.hpp"
#include "vope/error.hpp"

using namespace vope;

namespace {

NormalForm letter(std::uint32_t g, std::uint32_t d = 0) { return NormalForm::letter(Letter{g, d}); }

Scalar param(const Algebra& alg, const char* name) { return Scalar::param(alg.params(), name); }

}  // namespace

TEST_CASE("Virasoro table") {
  Engine eng(preset_virasoro());
  const Scalar c = param(eng.algebra(), "c");
  auto ope = eng.contraction(letter(0), letter(0));
  REQUIRE(ope.size() == 3);
  CHECK(ope[0].first == 0);
  CHECK(ope[0].second == letter(0, 1));
  CHECK(ope[1].second == 2 * letter(0));
  CHECK(ope[2].first == 3);
  CHECK(ope[2].second == NormalForm::identity(c / 2));
  CHECK(eng.locality_order(letter(0), letter(0)) == 4);
}

TEST_CASE("reordering lemma") {
  const Algebra alg = preset_virasoro();
  Engine eng(alg);
  const FieldExpr t = gen(alg, "T");
  const FieldExpr e =
      lincomb({{Scalar(1), nop(t, deriv(1, t))}, {Scalar(-1), nop(deriv(1, t), t)}});
  CHECK(eng.normalize(e) == letter(0, 3));
}

TEST_CASE("identity and vacuum laws") {
  for (const Algebra& alg : {preset_virasoro(), preset_su2()}) {
    Engine eng(alg);
    std::vector<NormalForm> fields{letter(0), letter(0, 1), eng.nop(letter(0), letter(0))};
    for (const auto& a : fields)
      for (int m = 0; m <= 4; ++m) {
        CHECK(eng.residue_product(a, m, NormalForm::identity()).is_zero());
        CHECK(eng.residue_product(a, -m - 1, NormalForm::identity()) == eng.derivative(a, m));
        CHECK(eng.residue_product(NormalForm::identity(), m, a).is_zero());
        CHECK(eng.residue_product(NormalForm::identity(), -m - 2, a).is_zero());
      }
    for (const auto& a : fields) CHECK(eng.residue_product(NormalForm::identity(), -1, a) == a);
  }
}

TEST_CASE("derivative rules") {
  const Algebra alg = preset_virasoro();
  Engine eng(alg);
  testing::FieldSampler sample(alg, 4, 17);
  for (int t = 0; t < 15; ++t) {
    const NormalForm a = sample(), b = sample();
    for (int n = -2; n <= 3; ++n) {
      // (da)_(n) b = -n a_(n-1) b
      CHECK(eng.residue_product(eng.derivative(a), n, b) ==
            Scalar(-n) * eng.residue_product(a, n - 1, b));
      // d(a_(n) b) = (da)_(n) b + a_(n) db
      CHECK(eng.derivative(eng.residue_product(a, n, b)) ==
            eng.residue_product(eng.derivative(a), n, b) + eng.residue_product(a, n, eng.derivative(b)));
    }
    // divided powers: d d a = 2 d^(2) a
    CHECK(eng.derivative(eng.derivative(a)) == Scalar(2) * eng.derivative(a, 2));
  }
}

TEST_CASE("su2 structure constants by brute force") {
  // sum_{a,b} f^{abc} f_{abd} = 2 h delta_{cd}, indices lowered with g_{ab} = 2 delta_{ab}
  const auto f = su2_structure_constants();
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d) {
      Scalar s(0);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s += f[(a * 3 + b) * 3 + c] * Scalar(8) * f[(a * 3 + b) * 3 + d];
      CHECK(s == Scalar(c == d ? 4 : 0));
    }
  // every other multiple of epsilon fails the normalization
  for (long num : {1L, 2L, 3L})
    for (long den : {1L, 2L, 4L}) {
      auto g = f;
      for (auto& x : g) x = x * Scalar::rational(2 * num, den);
      const bool ok = 2 * num == den;
      if (ok)
        CHECK_NOTHROW(validate_lie_data(g, 3, 2));
      else
        CHECK_THROWS_AS(validate_lie_data(g, 3, 2), AlgebraError);
    }
}

TEST_CASE("su2 current brackets") {
  Engine eng(preset_su2());
  const Scalar i = Scalar::imaginary_unit();
  const Scalar k = param(eng.algebra(), "k");
  const int eps[3][3][3] = {{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
                            {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
                            {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
  for (std::uint32_t a = 0; a < 3; ++a)
    for (std::uint32_t b = 0; b < 3; ++b) {
      NormalForm expected;
      for (std::uint32_t c = 0; c < 3; ++c)
        if (eps[a][b][c]) expected.add_scaled(letter(c), i * Scalar(eps[a][b][c]));
      CHECK(eng.residue_product(letter(a), 0, letter(b)) == expected);
      CHECK(eng.residue_product(letter(a), 1, letter(b)) ==
            (a == b ? NormalForm::identity(k / 2) : NormalForm()));
    }
}

TEST_CASE("skew symmetry against direct products") {
  for (const Algebra& alg : {preset_virasoro(), preset_su2()}) {
    Engine eng(alg);
    testing::FieldSampler sample(alg, 4, 23);
    for (int t = 0; t < 12; ++t) {
      const NormalForm a = sample(), b = sample();
      for (int m = -2; m <= 3; ++m) CHECK(eng.residue_product(b, m, a) == eng.skew(b, m, a));
    }
  }
}

TEST_CASE("quasi-commutativity") {
  // :ab: - :ba: = sum_{j>=0} (-1)^j d^(j+1) (a_(j) b)
  const Algebra alg = preset_virasoro();
  Engine eng(alg);
  testing::FieldSampler sample(alg, 4, 29);
  for (int t = 0; t < 10; ++t) {
    const NormalForm a = sample(), b = sample();
    NormalForm rhs;
    for (auto& [j, v] : eng.contraction(a, b))
      rhs.add_scaled(eng.derivative(v, j + 1), Scalar(j % 2 ? -1 : 1));
    CHECK(eng.nop(a, b) - eng.nop(b, a) == rhs);
  }
}

TEST_CASE("step budget") {
  Engine eng(preset_virasoro(), EngineOptions{5});
  const NormalForm tt(Monomial(std::vector<Letter>{{0, 0}, {0, 0}}));
  CHECK_THROWS_AS(eng.residue_product(tt, -3, tt), BudgetExceeded);
  eng.set_step_budget(1'000'000);
  CHECK_NOTHROW(eng.residue_product(tt, -3, tt));
}

TEST_CASE("free boson") {
  Engine eng(preset_free_boson());
  // :JJ:/2 is a Virasoro field of central charge 1
  const NormalForm t = Scalar::rational(1, 2) * eng.nop(letter(0), letter(0));
  CHECK(eng.residue_product(t, 3, t) == NormalForm::identity(Scalar::rational(1, 2)));
  CHECK(eng.residue_product(t, 1, t) == 2 * t);
  CHECK(eng.residue_product(t, 0, t) == eng.derivative(t));
}
