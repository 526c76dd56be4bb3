#include <random>

#include "doctest.h"
#include "vope/borcherds.hpp"
#include "vope/engine.hpp"
#include "vope/error.hpp"
#include "vope/parser.hpp"
#include "vope/render.hpp"

using namespace vope;

namespace {

void check_same(const Algebra& a, const Algebra& b) {
  CHECK(a.params()->names() == b.params()->names());
  REQUIRE(a.size() == b.size());
  for (std::uint32_t g = 0; g < a.size(); ++g) {
    CHECK(a.name(g) == b.name(g));
    CHECK(a.weight(g) == b.weight(g));
  }
  const auto ea = a.entries(), eb = b.entries();
  REQUIRE(ea.size() == eb.size());
  for (std::size_t k = 0; k < ea.size(); ++k) {
    CHECK(ea[k].left == eb[k].left);
    CHECK(ea[k].right == eb[k].right);
    CHECK(ea[k].index == eb[k].index);
    CHECK(ea[k].value == eb[k].value);
  }
  REQUIRE(a.lie().has_value() == b.lie().has_value());
  if (a.lie()) {
    CHECK(a.lie()->dim == b.lie()->dim);
    CHECK(a.lie()->dual_coxeter == b.lie()->dual_coxeter);
    CHECK(a.lie()->f == b.lie()->f);
  }
}

// ParseError position of `f()`, or (0, 0) when it does not throw.
template <typename F>
std::pair<std::size_t, std::size_t> error_at(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  return {0, 0};
}

FieldExpr random_expr(const Algebra& alg, std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 5);
  std::uniform_int_distribution<std::uint32_t> g(0, static_cast<std::uint32_t>(alg.size() - 1));
  const Scalar c = Scalar::param(alg.params(), alg.params()->names().front());
  const std::vector<Scalar> coeffs{Scalar(1), Scalar(-1), Scalar(2), Scalar::rational(-1, 2), c,
                                   c + Scalar(1), Scalar::imaginary_unit(), Scalar(1) / (c + Scalar(2))};
  std::uniform_int_distribution<std::size_t> coeff(0, coeffs.size() - 1);
  switch (pick(rng)) {
    case 0:
    case 1:
      return std::uniform_int_distribution<int>(0, 9)(rng) ? FieldExpr::generator(g(rng))
                                                           : FieldExpr::identity();
    case 2:
      return FieldExpr::derivative(std::uniform_int_distribution<int>(1, 3)(rng),
                                   random_expr(alg, rng, depth - 1));
    case 3:
    case 4:
      return FieldExpr::product(random_expr(alg, rng, depth - 1),
                                std::uniform_int_distribution<int>(-3, 3)(rng),
                                random_expr(alg, rng, depth - 1));
    default: {
      std::vector<std::pair<Scalar, FieldExpr>> terms;
      const int n = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int t = 0; t < n; ++t) terms.emplace_back(coeffs[coeff(rng)], random_expr(alg, rng, depth - 1));
      return FieldExpr::sum(std::move(terms));
    }
  }
}

const char* virasoro_file = R"(param c
field T weight 2
ope T T { 3: c/2*I; 1: 2*T; 0: d T }
)";

}  // namespace

TEST_CASE("render(parse(render(x))) = render(x)") {
  for (const Algebra& alg : {preset_virasoro(), preset_su2()}) {
    const Scope scope = Scope::of(alg);
    Engine eng(alg);
    std::mt19937 rng(13);
    for (int t = 0; t < 300; ++t) {
      const FieldExpr x = random_expr(alg, rng, 3);
      const std::string text = to_text(alg, x);
      const FieldExpr y = parse_field(text, scope);
      CHECK_MESSAGE(to_text(alg, y) == text, text);
      if (t < 40) CHECK(eng.normalize(y) == eng.normalize(x));
    }
  }
}

TEST_CASE("normal forms render to parseable text") {
  const Algebra alg = preset_virasoro();
  Engine eng(alg);
  const Scope scope = Scope::of(alg);
  const NormalForm v = eng.normalize(parse_field(":T :T T:: - d^(2) :d T T: + 3/(c+1)*T_(1) :T T:", scope));
  CHECK(eng.normalize(parse_field(to_text(alg, v), scope)) == v);
}

TEST_CASE("expression grammar") {
  const Algebra vir = preset_virasoro();
  const Scope s = Scope::of(vir);
  const FieldExpr t = gen(vir, "T");
  auto same = [&](const char* a, const FieldExpr& b) { CHECK(to_text(vir, parse_field(a, s)) == to_text(vir, b)); };
  same("2*T_(1) T", lincomb({{Scalar(2), prod(t, 1, t)}}));
  same("d T_(1) T", prod(deriv(1, t), 1, t));
  same("T_(1) T_(0) T", prod(t, 1, prod(t, 0, t)));
  same(":T T T:", nop(t, nop(t, t)));
  same(":T :T T::", nop(t, nop(t, t)));
  same("(:T T:)_(-2) d^(2) T", prod(nop(t, t), -2, deriv(2, t)));
  same("d d T", deriv(1, deriv(1, t)));

  const Value v = parse_value("(c^2 - 1)/(c - 1) + i*i", s);
  REQUIRE_FALSE(v.is_field());
  CHECK(v.scalar() == Scalar::param(vir.params(), "c"));
  CHECK(parse_value("c*T", s).is_field());
  CHECK(parse_value("2", s).field().kind() == FieldExpr::Kind::sum);

  CHECK(error_at([&] { parse_value("T +", s); }) == std::pair<std::size_t, std::size_t>{1, 4});
  CHECK(error_at([&] { parse_value("T_(1) X", s); }) == std::pair<std::size_t, std::size_t>{1, 7});
  CHECK(error_at([&] { parse_value("T*T", s); }) == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(error_at([&] { parse_value("T/0", s); }) == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(error_at([&] { parse_value(":T:", s); }) == std::pair<std::size_t, std::size_t>{1, 3});
  CHECK(error_at([&] { parse_value("T^2", s); }) == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(error_at([&] { parse_value("T $", s); }) == std::pair<std::size_t, std::size_t>{1, 3});
}

TEST_CASE("index variables") {
  const Algebra su2 = preset_su2();
  Scope s = Scope::of(su2);
  CHECK(s.index_range == 3);
  Engine eng(su2);
  const NormalForm cas = eng.normalize(parse_field("sum(a){:J^a J^a:}", s));
  CHECK(cas == eng.normalize(parse_field(":J^1 J^1: + :J^2 J^2: + :J^3 J^3:", s)));
  CHECK(free_indices("J^a_(0) J^b + sum(c){J^c}", s) == std::vector<std::string>{"a", "b"});
  CHECK_THROWS_AS(parse_value("J^a", s), ParseError);
  s.indices["a"] = 2;
  CHECK(to_text(su2, parse_field("J^a", s)) == "J^2");
  CHECK_THROWS_AS(parse_value("J^4", s), ParseError);

  auto sp = split_sum("sum(b){ J^b_(0) J^a }");
  REQUIRE(sp);
  CHECK(sp->first == "b");
  CHECK(sp->second == " J^b_(0) J^a ");
  CHECK_FALSE(split_sum("sum(b){J^b} + J^1"));
  CHECK_FALSE(split_sum("J^1"));
}

TEST_CASE("the Virasoro file equals the preset") {
  check_same(parse_algebra(virasoro_file), preset_virasoro());
}

TEST_CASE("undeclared generator in an OPE value") {
  CHECK(error_at([] { parse_algebra("param c\nfield T weight 2\nope T T { 1: 2*X }\n"); }) ==
        std::pair<std::size_t, std::size_t>{3, 16});
}

TEST_CASE("lie su2 level k equals the su2 preset") {
  check_same(parse_algebra("lie su2 level k"), preset_su2());
  // constants completed by antisymmetry from one entry
  const Algebra custom = parse_algebra("lie so3 dim 3 dual 2 level k { 1 2 3: 1/2 }");
  check_same(custom, preset_su2());
  CHECK(custom.lie()->name == "so3");
}

TEST_CASE("reversed blocks are completed by skew symmetry") {
  const Algebra alg = parse_algebra(R"(
    # free boson J and a Virasoro field T under which J is primary
    param c
    field J weight 1
    field T weight 2
    ope T T { 3: c/2*I; 1: 2*T; 0: d T }
    ope T J { 1: J; 0: d J }
    ope J J { 1: I }
  )");
  CHECK(alg.ope(0, 1, 1) == NormalForm::letter(Letter{0, 0}));
  CHECK(alg.ope(0, 1, 0).is_zero());
  CHECK(check_algebra_consistency(alg, 2).ok());
}

TEST_CASE("algebra file errors") {
  using P = std::pair<std::size_t, std::size_t>;
  CHECK(error_at([] { parse_algebra("field T weight 2\nfield T weight 2"); }) == P{2, 7});
  CHECK(error_at([] { parse_algebra("param c\nfield T weight 2\nope T T { 3: c*T }"); }) == P{3, 14});
  CHECK(error_at([] { parse_algebra("field T weight 2\nope T U { 1: T }"); }) == P{2, 7});
  CHECK(error_at([] { parse_algebra("field T weight 2\nope T T { 1: T; 1: T }"); }) == P{2, 17});
  CHECK(error_at([] { parse_algebra("field T weight 2\nope T T { 0: :d T T: }"); }) == P{2, 14});
  CHECK(error_at([] { parse_algebra("field A weight 1\nfield B weight 2\nope A B { 0: :A A: }"); }) ==
        P{3, 1});
  CHECK(error_at([] { parse_algebra("lie so3 dim 3 dual 2 level k { 1 2 3: 1 }"); }) == P{1, 1});
  CHECK(error_at([] { parse_algebra("lie so3 dim 3 dual 2 level k { 1 2 3: 1/2; 2 1 3: 1/2 }"); }) ==
        P{1, 44});
  CHECK(error_at([] { parse_algebra("field T weight 2\nfrobnicate"); }) == P{2, 1});
  CHECK(error_at([] { parse_algebra("field T weight 2\nope T T { 1: 2*T"); }) == P{2, 11});
  CHECK(error_at([] { parse_algebra("field d weight 2"); }) == P{1, 7});
}
