#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vope/algebra.hpp"
#include "vope/expr.hpp"
#include "vope/scalar.hpp"

namespace vope {

/// Result of parsing an expression: a scalar or a field. Scalars stand for
/// multiples of the identity field wherever a field is expected.
class Value {
 public:
  Value(Scalar s) : scalar_(std::move(s)) {}     // NOLINT(google-explicit-constructor)
  Value(FieldExpr f) : field_(std::move(f)) {}   // NOLINT(google-explicit-constructor)

  bool is_field() const { return field_.has_value(); }
  /// Requires !is_field().
  const Scalar& scalar() const { return *scalar_; }
  FieldExpr field() const;

 private:
  std::optional<Scalar> scalar_;
  std::optional<FieldExpr> field_;
};

/// Names visible to the expression parser.
struct Scope {
  ParamSpacePtr params;
  std::vector<GeneratorDecl> generators;
  int index_range = 0;                   ///< index variables run over 1..index_range
  std::map<std::string, Value> lets;     ///< script definitions
  std::map<std::string, int> indices;    ///< bound index variables

  static Scope of(const Algebra& alg);
  int generator(std::string_view name) const;
};

/// Number of values of an index variable: the dimension of the Lie data,
/// else the largest n such that some generator is named `X^n`.
int index_range(const Algebra& alg);

/// Expression grammar, loosest first:
///   sum      := term (('+' | '-') term)*
///   term     := unary (('*' | '/') unary)*        fields only scale
///   unary    := '-' unary | product
///   product  := power ['_(' int ')' product]       right-associative
///   power    := atom ('^' int)*                    scalars only
///   atom     := number | param | 'i' | 'I' | generator | X^v | let name
///             | 'd' atom | 'd^(' int ')' atom | ':' atom atom+ ':'
///             | '(' sum ')' | 'sum(' v '){' sum '}'
/// Throws ParseError with a 1-based position within `text`.
Value parse_value(std::string_view text, const Scope& scope);
FieldExpr parse_field(std::string_view text, const Scope& scope);

/// Index variables used as `X^v` without a binding, in order of first use.
std::vector<std::string> free_indices(std::string_view text, const Scope& scope);

/// (v, body) when the whole text is `sum(v){ body }`.
std::optional<std::pair<std::string, std::string>> split_sum(std::string_view text);

/// Algebra definition file:
///   param c, k
///   field T weight 2
///   ope T T { 3: c/2*I; 1: 2*T; 0: d T }
///   lie su2 level k
///   lie so3 dim 3 dual 2 level k { 1 2 3: 1/2 }
/// `#` starts a comment. OPE values are written in normal form. A missing
/// `ope B A` block is completed by skew symmetry when `ope A B` is linear in
/// the generators. `lie` adds J^1..J^dim at the given level (a parameter,
/// declared on the fly, or a number); listed structure constants are
/// completed by total antisymmetry. Errors, including those raised by
/// Algebra::define, are ParseErrors at the offending statement.
Algebra parse_algebra(std::string_view text);

/// Statements the algebra grammar starts with.
bool is_algebra_keyword(std::string_view word);

}  // namespace vope
