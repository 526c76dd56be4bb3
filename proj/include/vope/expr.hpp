#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "vope/algebra.hpp"
#include "vope/normal_form.hpp"
#include "vope/scalar.hpp"

namespace vope {

/// Immutable expression tree over the generators of an algebra. Nodes are
/// shared, so copies are cheap.
class FieldExpr {
 public:
  enum class Kind { generator, identity, derivative, product, sum };

  /// The identity field.
  FieldExpr();

  Kind kind() const { return node_->kind; }
  /// Generator index (generator nodes).
  std::uint32_t gen() const { return node_->gen; }
  /// Derivative order j (derivative nodes) or product index m (product nodes).
  int order() const { return node_->order; }
  int index() const { return node_->order; }
  const FieldExpr& child() const { return node_->children.front(); }
  const FieldExpr& left() const { return node_->children[0]; }
  const FieldExpr& right() const { return node_->children[1]; }
  /// Summands of a sum node.
  const std::vector<FieldExpr>& children() const { return node_->children; }
  const std::vector<Scalar>& coeffs() const { return node_->coeffs; }

  /// Address of the shared node; stable identity for caches.
  const void* id() const { return node_.get(); }

  static FieldExpr generator(std::uint32_t g);
  static FieldExpr identity() { return {}; }
  /// Divided-power derivative; order 0 returns `e` itself.
  static FieldExpr derivative(int j, FieldExpr e);
  static FieldExpr product(FieldExpr a, int m, FieldExpr b);
  static FieldExpr sum(std::vector<std::pair<Scalar, FieldExpr>> terms);

 private:
  struct Node {
    Kind kind = Kind::identity;
    std::uint32_t gen = 0;
    int order = 0;
    std::vector<FieldExpr> children;
    std::vector<Scalar> coeffs;
  };
  explicit FieldExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

/// Result of a weight query: the common weight, or nullopt when the
/// expression is inhomogeneous.
std::optional<int> weight(const Algebra& alg, const FieldExpr& e);

// Build helpers; all throw AlgebraError on an unknown generator.
FieldExpr gen(const Algebra& alg, std::string_view name);
FieldExpr nop(FieldExpr a, FieldExpr b);
FieldExpr prod(FieldExpr a, int m, FieldExpr b);
FieldExpr deriv(int j, FieldExpr a);
FieldExpr lincomb(std::vector<std::pair<Scalar, FieldExpr>> terms);

/// The expression tree of a normal form: nested (-1)-products of derived
/// generators, summed with the coefficients.
FieldExpr to_expr(const NormalForm& nf);
FieldExpr to_expr(const Monomial& m);

}  // namespace vope
