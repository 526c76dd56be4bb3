#include "vope/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <memory>
#include <set>

#include "vope/engine.hpp"
#include "vope/error.hpp"

namespace vope {

namespace {

struct Token {
  enum class Kind { ident, number, sym, end };
  Kind kind = Kind::end;
  std::string text;
  std::size_t line = 1, col = 1;
  std::size_t offset = 0;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, k = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++k) {
      if (s[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (true) {
    while (k < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[k]))) {
        advance(1);
      } else if (s[k] == '#') {
        while (k < s.size() && s[k] != '\n') advance(1);
      } else {
        break;
      }
    }
    Token t;
    t.line = line;
    t.col = col;
    t.offset = k;
    if (k == s.size()) {
      out.push_back(t);
      return out;
    }
    const char c = s[k];
    std::size_t n = 1;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::ident;
      while (k + n < s.size() && std::isalnum(static_cast<unsigned char>(s[k + n]))) ++n;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::number;
      while (k + n < s.size() && std::isdigit(static_cast<unsigned char>(s[k + n]))) ++n;
    } else if (c == '.' && k + 1 < s.size() && s[k + 1] == '.') {
      t.kind = Token::Kind::sym;
      n = 2;
    } else if (std::string_view("(){}:;,+-*/^_=").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::sym;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    t.text = std::string(s.substr(k, n));
    out.push_back(std::move(t));
    advance(n);
  }
}

class Cursor {
 public:
  explicit Cursor(const std::vector<Token>& toks) : t_(toks) {}

  const Token& peek(std::size_t ahead = 0) const {
    return t_[std::min(pos_ + ahead, t_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < t_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::end; }
  bool is_sym(std::string_view s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::sym && t.text == s;
  }
  bool is_word(std::string_view s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::ident && t.text == s;
  }

  [[noreturn]] static void fail(const std::string& msg, const Token& at) {
    throw ParseError(msg, at.line, at.col);
  }
  static std::string describe(const Token& t) {
    return t.kind == Token::Kind::end ? "end of input" : "'" + t.text + "'";
  }

  const Token& expect(std::string_view s) {
    if (!is_sym(s)) fail("expected '" + std::string(s) + "', found " + describe(peek()), peek());
    return next();
  }
  const Token& expect_word(std::string_view s) {
    if (!is_word(s)) fail("expected '" + std::string(s) + "', found " + describe(peek()), peek());
    return next();
  }
  const Token& identifier() {
    if (peek().kind != Token::Kind::ident) fail("expected a name, found " + describe(peek()), peek());
    return next();
  }
  int integer(bool allow_negative = true) {
    bool neg = false;
    if (allow_negative && is_sym("-")) {
      next();
      neg = true;
    }
    const Token& t = next();
    if (t.kind != Token::Kind::number) fail("expected an integer, found " + describe(t), t);
    if (t.text.size() > 6) fail("integer " + t.text + " out of range", t);
    const int v = std::stoi(t.text);
    return neg ? -v : v;
  }

 protected:
  const std::vector<Token>& t_;
  std::size_t pos_ = 0;
};

Scalar number(const Token& t) { return Scalar(Gaussian(mpq_class(t.text))); }

// s * f, folding into a single-term sum so that `2*T` is one sum node
FieldExpr scale(const Scalar& s, const FieldExpr& f) {
  if (s.is_one()) return f;
  if (f.kind() == FieldExpr::Kind::sum && f.children().size() == 1)
    return FieldExpr::sum({{s * f.coeffs()[0], f.children()[0]}});
  return FieldExpr::sum({{s, f}});
}

Value combine(const std::vector<std::pair<Scalar, Value>>& terms) {
  const bool any_field =
      std::any_of(terms.begin(), terms.end(), [](const auto& t) { return t.second.is_field(); });
  if (!any_field) {
    Scalar acc(0);
    for (const auto& [c, v] : terms) acc += c * v.scalar();
    return acc;
  }
  std::vector<std::pair<Scalar, FieldExpr>> out;
  for (const auto& [c, v] : terms) {
    FieldExpr f = v.field();
    if (f.kind() == FieldExpr::Kind::sum && f.children().size() == 1)
      out.emplace_back(c * f.coeffs()[0], f.children()[0]);
    else
      out.emplace_back(c, f);
  }
  return FieldExpr::sum(std::move(out));
}

class ExprParser : public Cursor {
 public:
  ExprParser(const std::vector<Token>& toks, const Scope& scope,
             std::vector<std::string>* free = nullptr)
      : Cursor(toks), scope_(scope), indices_(scope.indices), free_(free) {}

  Value parse_all() {
    Value v = sum();
    if (!at_end()) fail("unexpected " + describe(peek()), peek());
    return v;
  }

 private:
  Value sum() {
    std::vector<std::pair<Scalar, Value>> terms;
    terms.emplace_back(Scalar(1), term());
    while (is_sym("+") || is_sym("-")) {
      const bool minus = next().text == "-";
      terms.emplace_back(Scalar(minus ? -1 : 1), term());
    }
    if (terms.size() == 1) return terms.front().second;
    return combine(terms);
  }

  Value term() {
    Value v = unary();
    while (is_sym("*") || is_sym("/")) {
      const Token& op = next();
      Value w = unary();
      if (op.text == "*") {
        if (v.is_field() && w.is_field())
          fail("fields multiply only as :A B: or A_(m) B", op);
        if (!v.is_field() && !w.is_field())
          v = v.scalar() * w.scalar();
        else
          v = v.is_field() ? scale(w.scalar(), v.field()) : scale(v.scalar(), w.field());
      } else {
        if (w.is_field()) fail("cannot divide by a field", op);
        if (w.scalar().is_zero()) fail("division by zero", op);
        const Scalar inv = Scalar(1) / w.scalar();
        v = v.is_field() ? Value(scale(inv, v.field())) : Value(v.scalar() * inv);
      }
    }
    return v;
  }

  Value unary() {
    if (is_sym("-")) {
      next();
      Value v = unary();
      return v.is_field() ? Value(scale(Scalar(-1), v.field())) : Value(-v.scalar());
    }
    return product();
  }

  Value product() {
    Value v = power();
    if (!is_sym("_")) return v;
    next();
    expect("(");
    const int m = integer();
    expect(")");
    Value r = product();
    return FieldExpr::product(v.field(), m, r.field());
  }

  Value power() {
    Value v = atom();
    while (is_sym("^")) {
      const Token& caret = next();
      if (v.is_field()) fail("'^' applies to scalars only", caret);
      const int e = integer();
      if (e < 0 && v.scalar().is_zero()) fail("division by zero", caret);
      v = v.scalar().pow(e);
    }
    return v;
  }

  Value atom() {
    const Token& tk = peek();
    if (tk.kind == Token::Kind::number) return number(next());
    if (is_sym("(")) {
      next();
      Value v = sum();
      expect(")");
      return v;
    }
    if (is_sym(":")) return normal_ordered();
    if (tk.kind != Token::Kind::ident) fail("unexpected " + describe(tk), tk);

    const std::string& name = tk.text;
    if (auto it = indices_.find(name); it != indices_.end()) {
      next();
      return Scalar(static_cast<long>(it->second));
    }
    if (auto it = scope_.lets.find(name); it != scope_.lets.end()) {
      next();
      return it->second;
    }
    if (is_sym("^", 1))
      if (auto g = indexed_generator()) return FieldExpr::generator(*g);
    if (int g = scope_.generator(name); g >= 0) {
      next();
      return FieldExpr::generator(static_cast<std::uint32_t>(g));
    }
    if (scope_.params && scope_.params->index_of(name) >= 0) {
      next();
      return Scalar::param(scope_.params, name);
    }
    if (name == "sum" && is_sym("(", 1)) return sum_form();
    if (name == "d") return derivative();
    if (name == "i") {
      next();
      return Scalar::imaginary_unit();
    }
    if (name == "I") {
      next();
      return FieldExpr::identity();
    }
    fail("unknown name '" + name + "'", tk);
  }

  // X^1, or X^v with v an index variable
  std::optional<int> indexed_generator() {
    const Token& base = peek();
    const Token& idx = peek(2);
    std::string suffix;
    if (idx.kind == Token::Kind::number) {
      suffix = idx.text;
    } else if (idx.kind == Token::Kind::ident) {
      if (auto it = indices_.find(idx.text); it != indices_.end()) {
        suffix = std::to_string(it->second);
      } else if (scope_.generator(base.text + "^1") >= 0) {
        if (!free_) fail("unbound index '" + idx.text + "'", idx);
        if (std::find(free_->begin(), free_->end(), idx.text) == free_->end())
          free_->push_back(idx.text);
        suffix = "1";
      } else {
        return std::nullopt;
      }
    } else {
      return std::nullopt;
    }
    const int g = scope_.generator(base.text + "^" + suffix);
    if (g < 0) {
      if (idx.kind == Token::Kind::ident)
        fail("no generator '" + base.text + "^" + suffix + "'", base);
      return std::nullopt;
    }
    next();
    next();
    next();
    return g;
  }

  Value derivative() {
    next();
    int j = 1;
    if (is_sym("^")) {
      next();
      expect("(");
      j = integer(false);
      expect(")");
    }
    return FieldExpr::derivative(j, atom().field());
  }

  Value normal_ordered() {
    const Token& open = next();
    std::vector<FieldExpr> ops;
    while (!(is_sym(":") && ops.size() >= 2)) {
      if (at_end()) fail("unterminated normally ordered product", open);
      ops.push_back(atom().field());
    }
    next();
    FieldExpr acc = ops.back();
    for (std::size_t k = ops.size() - 1; k-- > 0;) acc = FieldExpr::product(ops[k], -1, acc);
    return acc;
  }

  Value sum_form() {
    const Token& kw = next();
    expect("(");
    const Token& var = identifier();
    expect(")");
    expect("{");
    if (scope_.index_range <= 0) fail("'sum' needs indexed generators such as J^1", kw);
    if (scope_.generator(var.text) >= 0 || (scope_.params && scope_.params->index_of(var.text) >= 0))
      fail("index '" + var.text + "' shadows a generator or parameter", var);

    const auto prev = indices_.find(var.text);
    const bool shadowed = prev != indices_.end();
    const int saved = shadowed ? prev->second : 0;
    const std::size_t body = pos_;
    std::vector<std::pair<Scalar, Value>> terms;
    for (int k = 1; k <= scope_.index_range; ++k) {
      pos_ = body;
      indices_[var.text] = k;
      terms.emplace_back(Scalar(1), sum());
    }
    if (shadowed)
      indices_[var.text] = saved;
    else
      indices_.erase(var.text);
    expect("}");
    return combine(terms);
  }

  const Scope& scope_;
  std::map<std::string, int> indices_;
  std::vector<std::string>* free_;
};

// Tokens of one sub-expression, terminated by an end token at `stop`.
std::vector<Token> slice(const std::vector<Token>& toks, std::size_t from, std::size_t to) {
  std::vector<Token> out(toks.begin() + static_cast<std::ptrdiff_t>(from),
                         toks.begin() + static_cast<std::ptrdiff_t>(to));
  Token end = toks[to];
  end.kind = Token::Kind::end;
  out.push_back(end);
  return out;
}

// ---- algebra files ----

struct Entry {
  Token at;
  int index = 0;
  std::vector<Token> value;
};

struct OpeBlock {
  Token at, left_tok, right_tok;
  std::string left, right;
  std::vector<Entry> entries;
};

struct LieEntry {
  Token at;
  std::array<int, 3> abc{};
  std::vector<Token> value;
};

struct LieStmt {
  Token at;
  std::string name;
  int dim = 0, dual = 0;
  Token level;
  std::vector<LieEntry> f;
};

class FileParser : public Cursor {
 public:
  explicit FileParser(const std::vector<Token>& toks) : Cursor(toks) {}

  Algebra parse() {
    while (!at_end()) statement();
    return build();
  }

 private:
  void statement() {
    const Token& kw = peek();
    if (is_word("param")) {
      next();
      do {
        const Token& n = identifier();
        declare_param(n.text, n);
      } while (is_sym(",") && (next(), true));
    } else if (is_word("field")) {
      next();
      const Token& at = peek();
      std::string name = generator_name();
      expect_word("weight");
      const int w = integer(false);
      if (w < 1) fail("weight must be at least 1", at);
      declare_generator(name, w, at);
    } else if (is_word("ope")) {
      next();
      OpeBlock b;
      b.at = kw;
      b.left_tok = peek();
      b.left = generator_name();
      b.right_tok = peek();
      b.right = generator_name();
      expect("{");
      while (!is_sym("}")) {
        Entry e;
        e.at = peek();
        e.index = integer();
        if (e.index < 0) fail("OPE index must be nonnegative", e.at);
        expect(":");
        e.value = value_tokens(e.at);
        b.entries.push_back(std::move(e));
        if (is_sym(";")) next();
      }
      next();
      opes_.push_back(std::move(b));
    } else if (is_word("lie")) {
      next();
      lie_statement(kw);
    } else {
      fail("expected 'param', 'field', 'ope' or 'lie', found " + describe(kw), kw);
    }
  }

  std::string generator_name() {
    const Token& n = identifier();
    std::string name = n.text;
    if (is_sym("^")) {
      next();
      const Token& k = peek();
      if (k.kind != Token::Kind::number) fail("expected an index after '^'", k);
      name += "^" + next().text;
    }
    return name;
  }

  // tokens up to ';' or the closing '}' at nesting depth 0
  std::vector<Token> value_tokens(const Token& owner) {
    const std::size_t from = pos_;
    int depth = 0;
    while (true) {
      if (at_end()) fail("unterminated block", owner);
      if (depth == 0 && (is_sym(";") || is_sym("}"))) break;
      if (is_sym("(") || is_sym("{")) ++depth;
      if (is_sym(")") || is_sym("}")) --depth;
      next();
    }
    if (pos_ == from) fail("missing value", peek());
    return slice(t_, from, pos_);
  }

  void lie_statement(const Token& kw) {
    LieStmt s;
    s.at = kw;
    if (lie_) fail("only one 'lie' statement is allowed", kw);
    s.name = identifier().text;
    if (s.name == "su2" && is_word("level")) {
      next();
      s.dim = 3;
      s.dual = 2;
    } else {
      expect_word("dim");
      s.dim = integer(false);
      if (s.dim < 1 || s.dim > 64) fail("dimension must be in 1..64", kw);
      expect_word("dual");
      s.dual = integer(false);
      expect_word("level");
    }
    s.level = peek();
    if (s.level.kind == Token::Kind::ident)
      declare_param(s.level.text, s.level, true);
    else if (s.level.kind != Token::Kind::number)
      fail("expected a level, found " + describe(s.level), s.level);
    next();
    if (s.name != "su2" || s.dim != 3 || is_sym("{")) {
      expect("{");
      while (!is_sym("}")) {
        LieEntry e;
        e.at = peek();
        for (int& x : e.abc) {
          const Token& t = peek();
          x = integer(false);
          if (x < 1 || x > s.dim)
            fail("index " + std::to_string(x) + " outside 1.." + std::to_string(s.dim), t);
        }
        expect(":");
        e.value = value_tokens(e.at);
        s.f.push_back(std::move(e));
        if (is_sym(";")) next();
      }
      next();
    }
    for (int a = 1; a <= s.dim; ++a) declare_generator("J^" + std::to_string(a), 1, kw);
    lie_ = std::move(s);
  }

  void declare_param(const std::string& name, const Token& at, bool reuse = false) {
    if (name == "i" || name == "I" || name == "d" || name == "sum")
      fail("'" + name + "' is reserved", at);
    if (std::find(params_.begin(), params_.end(), name) != params_.end()) {
      if (reuse) return;
      fail("duplicate parameter '" + name + "'", at);
    }
    for (const auto& g : gens_)
      if (g.name == name) fail("parameter '" + name + "' clashes with a generator", at);
    params_.push_back(name);
  }

  void declare_generator(const std::string& name, int weight, const Token& at) {
    const std::string base = name.substr(0, name.find('^'));
    if (base == "i" || base == "I" || base == "d" || base == "sum")
      fail("'" + name + "' is reserved", at);
    for (const auto& g : gens_)
      if (g.name == name) fail("duplicate generator '" + name + "'", at);
    if (std::find(params_.begin(), params_.end(), name) != params_.end())
      fail("generator '" + name + "' clashes with a parameter", at);
    gens_.push_back({name, weight});
  }

  int gen_index(const std::string& name) const {
    for (std::size_t k = 0; k < gens_.size(); ++k)
      if (gens_[k].name == name) return static_cast<int>(k);
    return -1;
  }

  // d^(j) applied to a (derived) generator: letter and divided-power factor
  std::optional<std::pair<Letter, Scalar>> letter_of(const FieldExpr& e) const {
    if (e.kind() == FieldExpr::Kind::generator) return std::make_pair(Letter{e.gen(), 0}, Scalar(1));
    if (e.kind() != FieldExpr::Kind::derivative) return std::nullopt;
    auto inner = letter_of(e.child());
    if (!inner) return std::nullopt;
    const auto d = inner->first.deriv;
    const auto j = static_cast<std::uint32_t>(e.order());
    Scalar c = inner->second * Scalar(Gaussian(mpq_class(binomial(d + j, j))));
    return std::make_pair(Letter{inner->first.gen, d + j}, c);
  }

  NormalForm literal(const FieldExpr& e, const Token& at) const {
    using K = FieldExpr::Kind;
    switch (e.kind()) {
      case K::identity:
        return NormalForm::identity();
      case K::sum: {
        NormalForm out;
        for (std::size_t k = 0; k < e.children().size(); ++k)
          out.add_scaled(literal(e.children()[k], at), e.coeffs()[k]);
        return out;
      }
      case K::generator:
      case K::derivative: {
        if (e.kind() == K::derivative) {
          const FieldExpr* x = &e;
          while (x->kind() == K::derivative) x = &x->child();
          if (x->kind() == K::identity) return {};
        }
        auto l = letter_of(e);
        if (!l) fail("OPE values must be in normal form: derivatives apply to generators", at);
        return NormalForm::letter(l->first, l->second);
      }
      case K::product: {
        Monomial::Letters ls;
        Scalar c(1);
        const FieldExpr* x = &e;
        while (true) {
          const bool nop = x->kind() == K::product;
          if (nop && x->index() != -1)
            fail("OPE values must be in normal form: use :A B: instead of A_(m) B", at);
          auto l = letter_of(nop ? x->left() : *x);
          if (!l) fail("operands of :...: in OPE values must be derived generators", at);
          if (!ls.empty() && letter_less(l->first, ls.back()))
            fail("normally ordered product not in standard order (declaration order, higher "
                 "derivatives first)",
                 at);
          ls.push_back(l->first);
          c *= l->second;
          if (!nop) break;
          x = &x->right();
        }
        return NormalForm(Monomial(std::move(ls)), c);
      }
    }
    return {};
  }

  Algebra build() {
    auto space = std::make_shared<const ParamSpace>(params_);
    Scope scope;
    scope.params = space;
    scope.generators = gens_;
    int range = 0;
    for (const auto& g : gens_)
      if (auto p = g.name.find('^'); p != std::string::npos)
        range = std::max(range, std::stoi(g.name.substr(p + 1)));
    if (lie_) range = lie_->dim;
    scope.index_range = range;

    std::vector<OpeEntry> table;
    std::set<std::pair<int, int>> given;
    std::map<std::pair<int, int>, const OpeBlock*> linear;
    for (const auto& b : opes_) {
      const int a = gen_index(b.left), c = gen_index(b.right);
      if (a < 0) fail("unknown generator '" + b.left + "'", b.left_tok);
      if (c < 0) fail("unknown generator '" + b.right + "'", b.right_tok);
      if (!given.insert({a, c}).second)
        fail("duplicate 'ope " + b.left + " " + b.right + "' block", b.at);
      const int wsum = gens_[a].weight + gens_[c].weight;
      std::set<int> seen;
      bool is_linear = true;
      for (const auto& e : b.entries) {
        if (!seen.insert(e.index).second)
          fail("duplicate entry " + std::to_string(e.index), e.at);
        NormalForm v = literal(ExprParser(e.value, scope).parse_all().field(), e.value.front());
        const int expected = wsum - e.index - 1;
        for (const auto& [m, coeff] : v.terms()) {
          int w = 0;
          for (const auto& x : m.letters()) w += gens_[x.gen].weight + static_cast<int>(x.deriv);
          if (w != expected)
            fail("weight-inconsistent entry: expected weight " + std::to_string(expected) +
                     ", found " + std::to_string(w),
                 e.value.front());
          if (m.size() > 1) is_linear = false;
        }
        if (!v.is_zero()) table.push_back({b.left, b.right, e.index, std::move(v)});
      }
      if (a != c) linear[{a, c}] = is_linear ? &b : nullptr;
    }

    std::optional<LieData> lie;
    if (lie_) lie = lie_entries(*lie_, space, scope, table, given);

    // skew completion of missing reversed blocks
    std::vector<std::pair<int, int>> missing;
    for (const auto& [pair, block] : linear) {
      if (given.count({pair.second, pair.first})) continue;
      if (!block) {
        const OpeBlock* b = nullptr;
        for (const auto& o : opes_)
          if (gen_index(o.left) == pair.first && gen_index(o.right) == pair.second) b = &o;
        fail("'ope " + gens_[pair.second].name + " " + gens_[pair.first].name +
                 "' must be given: the entries of this block are not linear",
             b->at);
      }
      missing.push_back(pair);
    }
    if (!missing.empty()) {
      Engine eng(define(space, table, lie));
      for (const auto& [a, b] : missing) {
        const auto field = [](int g) { return NormalForm::letter(Letter{static_cast<std::uint32_t>(g), 0}); };
        for (int m = 0; m < gens_[a].weight + gens_[b].weight; ++m) {
          NormalForm v = eng.skew(field(b), m, field(a));
          if (!v.is_zero()) table.push_back({gens_[b].name, gens_[a].name, m, std::move(v)});
        }
      }
    }
    return define(space, table, lie);
  }

  Algebra define(const ParamSpacePtr& space, const std::vector<OpeEntry>& table,
                 const std::optional<LieData>& lie) const {
    try {
      return Algebra::define(space, gens_, table, lie);
    } catch (const AlgebraError& e) {
      fail(e.what(), lie_ ? lie_->at : t_.front());
    }
  }

  LieData lie_entries(const LieStmt& s, const ParamSpacePtr& space, const Scope& scope,
                      std::vector<OpeEntry>& table, std::set<std::pair<int, int>>& given) const {
    const auto n = static_cast<std::size_t>(s.dim);
    std::vector<Scalar> f;
    if (s.name == "su2" && s.f.empty() && s.dim == 3) {
      f = su2_structure_constants();
    } else {
      f.assign(n * n * n, Scalar(0));
      std::vector<bool> set(n * n * n, false);
      for (const auto& e : s.f) {
        Value v = ExprParser(e.value, scope).parse_all();
        if (v.is_field() || !v.scalar().is_constant())
          fail("structure constants must be numbers", e.value.front());
        const Scalar x = v.scalar();
        auto [a, b, c] = e.abc;
        if ((a == b || b == c || a == c) && !x.is_zero())
          fail("f^{abc} with a repeated index must vanish", e.at);
        const std::array<std::array<int, 3>, 6> perms{
            {{a, b, c}, {b, c, a}, {c, a, b}, {b, a, c}, {a, c, b}, {c, b, a}}};
        for (std::size_t p = 0; p < perms.size(); ++p) {
          const std::size_t idx = ((perms[p][0] - 1) * n + (perms[p][1] - 1)) * n + (perms[p][2] - 1);
          const Scalar y = p < 3 ? x : -x;
          if (set[idx] && !(f[idx] == y))
            fail("value conflicts with an earlier entry under antisymmetry", e.at);
          f[idx] = y;
          set[idx] = true;
        }
      }
    }
    try {
      validate_lie_data(f, s.dim, s.dual);
    } catch (const AlgebraError& e) {
      fail(e.what(), s.at);
    }

    const Scalar k = s.level.kind == Token::Kind::ident ? Scalar::param(space, s.level.text)
                                                        : number(s.level);
    const int first = gen_index("J^1");
    for (int a = 0; a < s.dim; ++a)
      for (int b = 0; b < s.dim; ++b) {
        const int ga = first + a, gb = first + b;
        if (given.count({ga, gb}))
          fail("'ope " + gens_[ga].name + " " + gens_[gb].name + "' is fixed by the 'lie' statement",
               s.at);
        given.insert({ga, gb});
        if (a == b) table.push_back({gens_[ga].name, gens_[gb].name, 1, NormalForm::identity(k / 2)});
        NormalForm v;
        for (int c = 0; c < s.dim; ++c) {
          const Scalar& fabc = f[(a * n + b) * n + c];
          if (!fabc.is_zero())
            v.add_term(Monomial(Letter{static_cast<std::uint32_t>(first + c), 0}),
                       Scalar::imaginary_unit() * Scalar(2) * fabc);
        }
        if (!v.is_zero()) table.push_back({gens_[ga].name, gens_[gb].name, 0, std::move(v)});
      }
    return LieData{s.name, s.dim, s.dual, std::move(f)};
  }

  std::vector<std::string> params_;
  std::vector<GeneratorDecl> gens_;
  std::vector<OpeBlock> opes_;
  std::optional<LieStmt> lie_;
};

}  // namespace

FieldExpr Value::field() const {
  if (field_) return *field_;
  return scale(*scalar_, FieldExpr::identity());
}

Scope Scope::of(const Algebra& alg) {
  Scope s;
  s.params = alg.params();
  s.generators = alg.generators();
  s.index_range = vope::index_range(alg);
  return s;
}

int Scope::generator(std::string_view name) const {
  for (std::size_t k = 0; k < generators.size(); ++k)
    if (generators[k].name == name) return static_cast<int>(k);
  return -1;
}

int index_range(const Algebra& alg) {
  if (alg.lie()) return alg.lie()->dim;
  int range = 0;
  for (const auto& g : alg.generators()) {
    auto p = g.name.find('^');
    if (p != std::string::npos) range = std::max(range, std::stoi(g.name.substr(p + 1)));
  }
  return range;
}

Value parse_value(std::string_view text, const Scope& scope) {
  const auto toks = lex(text);
  return ExprParser(toks, scope).parse_all();
}

FieldExpr parse_field(std::string_view text, const Scope& scope) {
  return parse_value(text, scope).field();
}

std::vector<std::string> free_indices(std::string_view text, const Scope& scope) {
  const auto toks = lex(text);
  std::vector<std::string> out;
  ExprParser(toks, scope, &out).parse_all();
  return out;
}

std::optional<std::pair<std::string, std::string>> split_sum(std::string_view text) {
  std::vector<Token> t;
  try {
    t = lex(text);
  } catch (const ParseError&) {
    return std::nullopt;
  }
  if (t.size() < 7 || t[0].text != "sum" || t[1].text != "(" ||
      t[2].kind != Token::Kind::ident || t[3].text != ")" || t[4].text != "{")
    return std::nullopt;
  int depth = 0;
  for (std::size_t k = 4; k + 1 < t.size(); ++k) {
    if (t[k].kind != Token::Kind::sym) continue;
    if (t[k].text == "{") ++depth;
    if (t[k].text == "}" && --depth == 0) {
      if (k + 2 != t.size()) return std::nullopt;
      return std::make_pair(
          t[2].text, std::string(text.substr(t[4].offset + 1, t[k].offset - t[4].offset - 1)));
    }
  }
  return std::nullopt;
}

Algebra parse_algebra(std::string_view text) {
  const auto toks = lex(text);
  return FileParser(toks).parse();
}

bool is_algebra_keyword(std::string_view word) {
  return word == "param" || word == "field" || word == "ope" || word == "lie";
}

}  // namespace vope
