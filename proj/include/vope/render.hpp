#pragma once

#include <string>

#include "vope/algebra.hpp"
#include "vope/expr.hpp"
#include "vope/normal_form.hpp"
#include "vope/wick.hpp"

namespace vope {

// Text forms parse back with the expression grammar: `d T`, `d^(3) T`,
// `:d T T:`, `A_(m) B`, `1/2*c*I`.
std::string to_text(const Algebra& alg, const Monomial& m);
std::string to_text(const Algebra& alg, const NormalForm& nf);
std::string to_text(const Algebra& alg, const FieldExpr& e);
/// `T(z) T(w) ~ 1/2*c*I/(z-w)^4 + 2*T/(z-w)^2 + d T/(z-w)`, or `~ 0` when
/// the series is empty. Poles are listed in descending order.
std::string to_text(const Algebra& alg, const SingularSeries& s, const std::string& left,
                    const std::string& right);

std::string to_latex(const Algebra& alg, const Monomial& m);
std::string to_latex(const Algebra& alg, const NormalForm& nf);
std::string to_latex(const Algebra& alg, const SingularSeries& s, const std::string& left,
                     const std::string& right);

}  // namespace vope
