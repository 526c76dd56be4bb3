#include "vope/expr.hpp"

#include "vope/error.hpp"

namespace vope {

FieldExpr::FieldExpr() {
  static const auto identity_node = std::make_shared<const Node>();
  node_ = identity_node;
}

FieldExpr FieldExpr::generator(std::uint32_t g) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::generator;
  n->gen = g;
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::derivative(int j, FieldExpr e) {
  if (j < 0) throw AlgebraError("negative derivative order");
  if (j == 0) return e;
  auto n = std::make_shared<Node>();
  n->kind = Kind::derivative;
  n->order = j;
  n->children.push_back(std::move(e));
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::product(FieldExpr a, int m, FieldExpr b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  n->order = m;
  n->children.push_back(std::move(a));
  n->children.push_back(std::move(b));
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::sum(std::vector<std::pair<Scalar, FieldExpr>> terms) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::sum;
  for (auto& [c, e] : terms) {
    n->coeffs.push_back(std::move(c));
    n->children.push_back(std::move(e));
  }
  return FieldExpr(std::move(n));
}

std::optional<int> weight(const Algebra& alg, const FieldExpr& e) {
  switch (e.kind()) {
    case FieldExpr::Kind::identity:
      return 0;
    case FieldExpr::Kind::generator:
      return alg.weight(e.gen());
    case FieldExpr::Kind::derivative: {
      auto w = weight(alg, e.child());
      return w ? std::optional<int>(*w + e.order()) : std::nullopt;
    }
    case FieldExpr::Kind::product: {
      auto a = weight(alg, e.left());
      auto b = weight(alg, e.right());
      if (!a || !b) return std::nullopt;
      return *a + *b - e.index() - 1;
    }
    case FieldExpr::Kind::sum: {
      std::optional<int> w;
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (e.coeffs()[i].is_zero()) continue;
        auto wi = weight(alg, e.children()[i]);
        if (!wi || (w && *w != *wi)) return std::nullopt;
        w = wi;
      }
      // an empty or all-zero sum carries no weight information
      return w ? w : std::nullopt;
    }
  }
  return std::nullopt;
}

FieldExpr gen(const Algebra& alg, std::string_view name) {
  int g = alg.generator_index(name);
  if (g < 0) throw AlgebraError("unknown generator '" + std::string(name) + "'");
  return FieldExpr::generator(static_cast<std::uint32_t>(g));
}

FieldExpr nop(FieldExpr a, FieldExpr b) { return FieldExpr::product(std::move(a), -1, std::move(b)); }

FieldExpr prod(FieldExpr a, int m, FieldExpr b) {
  return FieldExpr::product(std::move(a), m, std::move(b));
}

FieldExpr deriv(int j, FieldExpr a) { return FieldExpr::derivative(j, std::move(a)); }

FieldExpr lincomb(std::vector<std::pair<Scalar, FieldExpr>> terms) {
  return FieldExpr::sum(std::move(terms));
}

FieldExpr to_expr(const Monomial& m) {
  if (m.empty()) return FieldExpr::identity();
  const auto& ls = m.letters();
  auto letter = [](const Letter& x) {
    return FieldExpr::derivative(static_cast<int>(x.deriv), FieldExpr::generator(x.gen));
  };
  FieldExpr acc = letter(ls.back());
  for (std::size_t i = ls.size() - 1; i-- > 0;) acc = nop(letter(ls[i]), acc);
  return acc;
}

FieldExpr to_expr(const NormalForm& nf) {
  std::vector<std::pair<Scalar, FieldExpr>> terms;
  for (const auto& [m, c] : nf.terms()) terms.emplace_back(c, to_expr(m));
  return FieldExpr::sum(std::move(terms));
}

}  // namespace vope
