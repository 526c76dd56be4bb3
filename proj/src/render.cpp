#include "vope/render.hpp"

#include <cctype>

namespace vope {

namespace {

std::string letter_text(const Algebra& alg, const Letter& x) {
  const std::string& name = alg.name(x.gen);
  if (x.deriv == 0) return name;
  if (x.deriv == 1) return "d " + name;
  return "d^(" + std::to_string(x.deriv) + ") " + name;
}

std::string latex_name(const std::string& name) {
  auto caret = name.find('^');
  if (caret == std::string::npos) return name;
  return name.substr(0, caret) + "^{" + name.substr(caret + 1) + "}";
}

std::string letter_latex(const Algebra& alg, const Letter& x) {
  std::string name = latex_name(alg.name(x.gen));
  if (x.deriv == 0) return name;
  if (x.deriv == 1) return "\\partial " + name;
  return "\\partial^{(" + std::to_string(x.deriv) + ")} " + name;
}

// Joins signed terms: "a", "-b" -> "a - b".
void append_term(std::string& out, const std::string& term) {
  if (out.empty()) {
    out = term;
  } else if (!term.empty() && term[0] == '-') {
    out += " - " + term.substr(1);
  } else {
    out += " + " + term;
  }
}

std::string term_text(const Scalar& c, const std::string& mono) {
  if (c.is_one()) return mono;
  if ((-c).is_one()) return "-" + mono;
  std::string cs = c.to_string();
  if (c.needs_parens()) cs = "(" + cs + ")";
  return cs + "*" + mono;
}

std::string term_latex(const Scalar& c, const std::string& mono, bool identity) {
  if (identity) return c.to_latex();
  if (c.is_one()) return mono;
  if ((-c).is_one()) return "-" + mono;
  std::string cs = c.to_latex();
  if (c.needs_parens()) cs = "\\left(" + cs + "\\right)";
  return cs + " " + mono;
}

bool is_atom(const FieldExpr& e) {
  return e.kind() == FieldExpr::Kind::generator || e.kind() == FieldExpr::Kind::identity ||
         (e.kind() == FieldExpr::Kind::product && e.index() == -1);
}

std::string expr_text(const Algebra& alg, const FieldExpr& e, int level);

std::string unary_text(const Algebra& alg, const FieldExpr& e) {
  if (is_atom(e) || e.kind() == FieldExpr::Kind::derivative) return expr_text(alg, e, 2);
  return "(" + expr_text(alg, e, 0) + ")";
}

// operand inside :...:; a nested normally ordered product gets parentheses
std::string nop_operand(const Algebra& alg, const FieldExpr& e) {
  if (e.kind() == FieldExpr::Kind::product && e.index() == -1)
    return "(" + expr_text(alg, e, 0) + ")";
  return unary_text(alg, e);
}

std::string expr_text(const Algebra& alg, const FieldExpr& e, int level) {
  switch (e.kind()) {
    case FieldExpr::Kind::identity:
      return "I";
    case FieldExpr::Kind::generator:
      return alg.name(e.gen());
    case FieldExpr::Kind::derivative: {
      std::string d = e.order() == 1 ? "d " : "d^(" + std::to_string(e.order()) + ") ";
      return d + unary_text(alg, e.child());
    }
    case FieldExpr::Kind::product: {
      if (e.index() == -1) {
        std::string s = ":" + nop_operand(alg, e.left());
        const FieldExpr* r = &e.right();
        while (r->kind() == FieldExpr::Kind::product && r->index() == -1) {
          s += " " + nop_operand(alg, r->left());
          r = &r->right();
        }
        return s + " " + unary_text(alg, *r) + ":";
      }
      std::string s = unary_text(alg, e.left()) + "_(" + std::to_string(e.index()) + ") ";
      const FieldExpr& r = e.right();
      const bool chain = r.kind() == FieldExpr::Kind::product ||
                         r.kind() == FieldExpr::Kind::derivative ||
                         r.kind() == FieldExpr::Kind::generator ||
                         r.kind() == FieldExpr::Kind::identity;
      s += chain ? expr_text(alg, r, 1) : "(" + expr_text(alg, r, 0) + ")";
      return level >= 2 ? "(" + s + ")" : s;
    }
    case FieldExpr::Kind::sum: {
      std::string out;
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        const FieldExpr& c = e.children()[i];
        std::string body = c.kind() == FieldExpr::Kind::sum ? "(" + expr_text(alg, c, 0) + ")"
                                                            : expr_text(alg, c, 1);
        append_term(out, term_text(e.coeffs()[i], body));
      }
      if (out.empty()) out = "0";
      return level >= 1 ? "(" + out + ")" : out;
    }
  }
  return {};
}

// Fold scalar-only wrappers the way the parser does, so rendered text is
// a fixed point of parse-then-render.
FieldExpr tidy(const FieldExpr& e) {
  switch (e.kind()) {
    case FieldExpr::Kind::derivative:
      return FieldExpr::derivative(e.order(), tidy(e.child()));
    case FieldExpr::Kind::product:
      return FieldExpr::product(tidy(e.left()), e.index(), tidy(e.right()));
    case FieldExpr::Kind::sum: {
      std::vector<std::pair<Scalar, FieldExpr>> terms;
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        Scalar c = e.coeffs()[i];
        FieldExpr f = tidy(e.children()[i]);
        if (f.kind() == FieldExpr::Kind::sum && f.children().size() == 1) {
          c = c * f.coeffs()[0];
          f = f.children()[0];
        }
        terms.emplace_back(std::move(c), std::move(f));
      }
      if (terms.size() == 1 && terms[0].first.is_one()) return terms[0].second;
      return FieldExpr::sum(std::move(terms));
    }
    default:
      return e;
  }
}

std::string pole_text(int n) {
  return n == 1 ? "(z-w)" : "(z-w)^" + std::to_string(n);
}

}  // namespace

std::string to_text(const Algebra& alg, const Monomial& m) {
  if (m.empty()) return "I";
  if (m.size() == 1) return letter_text(alg, m.front());
  std::string s = ":";
  for (std::size_t i = 0; i < m.letters().size(); ++i) {
    if (i) s += " ";
    s += letter_text(alg, m.letters()[i]);
  }
  return s + ":";
}

std::string to_text(const Algebra& alg, const NormalForm& nf) {
  std::string out;
  for (const auto& [m, c] : nf.terms()) append_term(out, term_text(c, to_text(alg, m)));
  return out.empty() ? "0" : out;
}

std::string to_text(const Algebra& alg, const FieldExpr& e) { return expr_text(alg, tidy(e), 0); }

std::string to_text(const Algebra& alg, const SingularSeries& s, const std::string& left,
                    const std::string& right) {
  std::string out;
  for (auto it = s.poles().rbegin(); it != s.poles().rend(); ++it) {
    const NormalForm& v = it->second;
    std::string body = to_text(alg, v);
    if (v.size() > 1) body = "(" + body + ")";
    append_term(out, body + "/" + pole_text(it->first));
  }
  return left + "(z) " + right + "(w) ~ " + (out.empty() ? "0" : out);
}

std::string to_latex(const Algebra& alg, const Monomial& m) {
  if (m.empty()) return "I";
  if (m.size() == 1) return letter_latex(alg, m.front());
  std::string s = "{:}";
  for (std::size_t i = 0; i < m.letters().size(); ++i) {
    if (i) s += " ";
    s += letter_latex(alg, m.letters()[i]);
  }
  return s + "{:}";
}

std::string to_latex(const Algebra& alg, const NormalForm& nf) {
  std::string out;
  for (const auto& [m, c] : nf.terms())
    append_term(out, term_latex(c, to_latex(alg, m), m.empty()));
  return out.empty() ? "0" : out;
}

std::string to_latex(const Algebra& alg, const SingularSeries& s, const std::string& left,
                     const std::string& right) {
  std::string out;
  for (auto it = s.poles().rbegin(); it != s.poles().rend(); ++it) {
    std::string den = it->first == 1 ? "z-w" : "(z-w)^{" + std::to_string(it->first) + "}";
    append_term(out, "\\frac{" + to_latex(alg, it->second) + "}{" + den + "}");
  }
  return left + "(z)\\, " + right + "(w) \\sim " + (out.empty() ? "0" : out);
}

}  // namespace vope
