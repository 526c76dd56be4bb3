#include "vope/oracle.hpp"

#include <algorithm>
#include <climits>
#include <tuple>

#include "vope/error.hpp"

namespace vope {

namespace {

Gaussian gbinomial(long n, long k) { return Gaussian(mpq_class(binomial(n, k))); }

Gaussian constant_at(const Scalar& s, const Bindings& b) { return s.eval(b).to_constant(); }

void add_to(State& out, std::uint32_t id, const Gaussian& c) {
  auto [it, inserted] = out.try_emplace(id, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) out.erase(it);
  }
}

void add_scaled(State& out, const State& v, const Gaussian& c) {
  if (c.is_zero()) return;
  for (const auto& [id, x] : v) add_to(out, id, c.is_one() ? x : x * c);
}

std::string coeff_text(const Gaussian& c) {
  std::string s = c.to_string();
  bool compound = s.find_first_of("+-", 1) != std::string::npos;
  return compound ? "(" + s + ")" : s;
}

}  // namespace

Gaussian SparseMatrix::at(std::size_t row, std::size_t col) const {
  for (const auto& e : entries)
    if (e.row == row && e.col == col) return e.value;
  return Gaussian();
}

bool GradedModule::mode_before(Mode x, Mode y) const {
  const int sx = shift(x), sy = shift(y);
  return sx != sy ? sx > sy : x.gen < y.gen;
}

std::uint32_t GradedModule::intern(std::vector<Mode> word) const {
  if (auto it = word_ids_.find(word); it != word_ids_.end()) return it->second;
  int lvl = 0;
  for (const Mode& x : word) lvl += shift(x);
  const auto id = static_cast<std::uint32_t>(words_.size());
  word_ids_.emplace(word, id);
  words_.push_back(std::move(word));
  levels_.push_back(lvl);
  return id;
}

// [a_m, b_n] = sum_{i>=0} C(m,i) (a_(i) b)_{m+n-i}, with
// (d^(j) g)_k = (-1)^j C(k,j) g_{k-j} and I_k = delta_{k,-1}
GradedModule::Bracket GradedModule::bracket(Mode x, Mode y) const {
  Bracket br;
  std::map<Mode, Gaussian> acc;
  const auto& table = ope_[x.gen * alg_.size() + y.gen];
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Gaussian cm = gbinomial(x.n, static_cast<long>(i));
    if (cm.is_zero()) continue;
    const int k = x.n + y.n - static_cast<int>(i);
    const LinearOpe& op = table[i];
    if (k == -1 && !op.identity.is_zero()) br.constant += cm * op.identity;
    for (const auto& [g, j, c] : op.letters) {
      Gaussian v = cm * c * gbinomial(k, j);
      if (j % 2 != 0) v = -v;
      if (!v.is_zero()) acc[Mode{g, k - j}] += v;
    }
  }
  for (auto& [m, c] : acc)
    if (!c.is_zero()) br.modes.emplace_back(m, std::move(c));
  return br;
}

void GradedModule::add_apply(State& out, Mode x, std::uint32_t state, const Gaussian& c) const {
  add_scaled(out, apply(x, state), c);
}

const State& GradedModule::apply(Mode x, std::uint32_t state) const {
  ApplyKey key{x, state};
  if (auto it = apply_cache_.find(key); it != apply_cache_.end()) return it->second;

  State r;
  const std::vector<Mode> word = words_[state];
  const int s = shift(x);
  if (s + levels_[state] < 0) {
    // lowers below the highest weight
  } else if (word.empty()) {
    if (s > 0)
      r.emplace(intern({x}), Gaussian(1));
    else if (!zero_mode_[x.gen].is_zero())
      r.emplace(state, zero_mode_[x.gen]);
  } else if (s > 0 && !mode_before(word.front(), x)) {
    std::vector<Mode> w{x};
    w.insert(w.end(), word.begin(), word.end());
    r.emplace(intern(std::move(w)), Gaussian(1));
  } else {
    // x y W = y (x W) + [x, y] W
    const Mode y = word.front();
    const std::uint32_t rest = intern(std::vector<Mode>(word.begin() + 1, word.end()));
    const State& xw = apply(x, rest);
    for (const auto& [id, c] : xw) add_apply(r, y, id, c);
    const Bracket br = bracket(x, y);
    if (!br.constant.is_zero()) add_to(r, rest, br.constant);
    for (const auto& [m, c] : br.modes) add_apply(r, m, rest, c);
  }
  return apply_cache_.emplace(key, std::move(r)).first->second;
}

State GradedModule::apply(Mode x, const State& v) const {
  State r;
  for (const auto& [id, c] : v) add_apply(r, x, id, c);
  return r;
}

State GradedModule::truncate(const State& v) const {
  State r;
  for (const auto& [id, c] : v)
    if (levels_[id] <= cutoff_) r.emplace(id, c);
  return r;
}

SparseMatrix GradedModule::matrix(Mode x) const {
  SparseMatrix m;
  m.rows = m.cols = dim();
  for (std::uint32_t s = 0; s < dim(); ++s)
    for (const auto& [id, c] : apply(x, s))
      if (levels_[id] <= cutoff_) m.entries.push_back({id, s, c});
  return m;
}

std::string GradedModule::label(std::uint32_t state) const {
  std::string s;
  for (const Mode& x : words_[state])
    s += alg_.name(x.gen) + "_{" + std::to_string(x.n) + "} ";
  if (!s.empty()) s.pop_back();
  return s + "|hw>";
}

void GradedModule::enumerate(int level, std::vector<Mode>& prefix, int remaining,
                             const std::vector<Mode>& creators, std::size_t from) {
  if (remaining == 0) {
    intern(prefix);
    return;
  }
  for (std::size_t i = from; i < creators.size(); ++i) {
    const int s = shift(creators[i]);
    if (s > remaining) continue;
    prefix.push_back(creators[i]);
    enumerate(level, prefix, remaining - s, creators, i);
    prefix.pop_back();
  }
}

nlohmann::json GradedModule::to_json() const {
  nlohmann::json j;
  j["bindings"] = nlohmann::json::object();
  for (const auto& [k, v] : bindings_) j["bindings"][k] = v.to_string();
  j["cutoff"] = cutoff_;
  j["dims"] = nlohmann::json::array();
  for (int l = 0; l <= cutoff_; ++l) j["dims"].push_back(dim(l));
  j["basis"] = nlohmann::json::array();
  for (std::uint32_t s = 0; s < dim(); ++s) j["basis"].push_back(label(s));
  j["matrices"] = nlohmann::json::array();
  for (std::uint32_t g = 0; g < alg_.size(); ++g) {
    const int w = alg_.weight(g);
    for (int n = w - 1 - cutoff_; n <= w - 1 + cutoff_; ++n) {
      SparseMatrix m = matrix(Mode{g, n});
      if (m.is_zero()) continue;
      nlohmann::json entries = nlohmann::json::array();
      for (const auto& e : m.entries) entries.push_back({e.row, e.col, e.value.to_string()});
      j["matrices"].push_back({{"generator", alg_.name(g)}, {"n", n}, {"entries", entries}});
    }
  }
  return j;
}

GradedModule build_module(const Algebra& alg, const Bindings& bindings, const HighestWeight& hw,
                          int cutoff) {
  if (cutoff < 0 || cutoff > 10) throw DomainError("level cutoff must be between 0 and 10");
  GradedModule mod(alg, bindings, cutoff);
  const std::uint32_t n = static_cast<std::uint32_t>(alg.size());

  mod.ope_.resize(static_cast<std::size_t>(n) * n);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      auto& row = mod.ope_[a * n + b];
      const int poles = alg.max_pole(a, b);
      for (int i = 0; i < poles; ++i) {
        GradedModule::LinearOpe op;
        for (const auto& [m, c] : alg.ope(a, b, i).terms()) {
          Gaussian v = constant_at(c, bindings);
          if (m.empty()) {
            op.identity = v;
          } else if (m.size() == 1) {
            op.letters.emplace_back(m.front().gen, static_cast<int>(m.front().deriv), v);
          } else {
            throw AlgebraError("the mode oracle needs an OPE table linear in the generators; " +
                               alg.name(a) + "_(" + std::to_string(i) + ")" + alg.name(b) +
                               " contains a normally ordered product");
          }
        }
        row.push_back(std::move(op));
      }
    }

  mod.zero_mode_.assign(n, Gaussian());
  for (const auto& [name, v] : hw.zero_mode) {
    const int g = alg.generator_index(name);
    if (g < 0) throw AlgebraError("highest-weight data names unknown generator '" + name + "'");
    mod.zero_mode_[g] = v;
  }
  // zero modes act by scalars on |hw>, so their brackets must vanish there
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      const Mode x{a, alg.weight(a) - 1}, y{b, alg.weight(b) - 1};
      GradedModule::Bracket br = mod.bracket(x, y);
      Gaussian v = br.constant;
      for (const auto& [m, c] : br.modes)
        if (mod.shift(m) == 0) v += c * mod.zero_mode_[m.gen];
      if (!v.is_zero())
        throw DomainError("zero-mode eigenvalues are inconsistent with [" + alg.name(a) + ", " +
                          alg.name(b) + "] on the highest-weight vector");
    }

  std::vector<Mode> creators;
  for (std::uint32_t g = 0; g < n; ++g)
    for (int s = 1; s <= cutoff; ++s) creators.push_back(Mode{g, alg.weight(g) - 1 - s});
  std::sort(creators.begin(), creators.end(),
            [&](Mode x, Mode y) { return mod.mode_before(x, y); });

  mod.level_start_.push_back(0);
  for (int l = 0; l <= cutoff; ++l) {
    std::vector<Mode> prefix;
    mod.enumerate(l, prefix, l, creators, 0);
    mod.level_start_.push_back(mod.words_.size());
  }
  return mod;
}

namespace {

constexpr int kNoWeight = INT_MIN / 4;

// Modes of composite fields:
// (a_(m) b)_n = sum_i (-1)^i C(m,i) [a_{m-i} b_{n+i} - (-1)^m b_{m+n-i} a_i]
class FieldModes {
 public:
  explicit FieldModes(const GradedModule& mod) : mod_(mod) {}

  // Upper bound on the weights of the components of e.
  int max_weight(const FieldExpr& e) {
    if (auto it = weight_.find(e.id()); it != weight_.end()) return it->second;
    int w = kNoWeight;
    switch (e.kind()) {
      case FieldExpr::Kind::identity:
        w = 0;
        break;
      case FieldExpr::Kind::generator:
        w = mod_.algebra().weight(e.gen());
        break;
      case FieldExpr::Kind::derivative:
        w = max_weight(e.child());
        if (w != kNoWeight) w += e.order();
        break;
      case FieldExpr::Kind::product: {
        const int a = max_weight(e.left()), b = max_weight(e.right());
        if (a != kNoWeight && b != kNoWeight) w = a + b - e.index() - 1;
        break;
      }
      case FieldExpr::Kind::sum:
        for (const auto& c : e.children()) w = std::max(w, max_weight(c));
        break;
    }
    weight_.emplace(e.id(), w);
    return w;
  }

  const State& apply(const FieldExpr& e, int n, std::uint32_t state) {
    Key key{e.id(), n, state};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    State r;
    const int wmax = max_weight(e);
    const int lvl = mod_.level(state);
    if (wmax != kNoWeight && lvl + wmax - 1 - n >= 0) {
      switch (e.kind()) {
        case FieldExpr::Kind::identity:
          if (n == -1) r.emplace(state, Gaussian(1));
          break;
        case FieldExpr::Kind::generator:
          r = mod_.apply(Mode{e.gen(), n}, state);
          break;
        case FieldExpr::Kind::derivative: {
          const int j = e.order();
          Gaussian c = gbinomial(n, j);
          if (j % 2 != 0) c = -c;
          add_scaled(r, apply(e.child(), n - j, state), c);
          break;
        }
        case FieldExpr::Kind::sum:
          for (std::size_t i = 0; i < e.children().size(); ++i)
            add_scaled(r, apply(e.children()[i], n, state),
                       constant_at(e.coeffs()[i], mod_.bindings()));
          break;
        case FieldExpr::Kind::product:
          r = product(e, n, state, lvl);
          break;
      }
    }
    return cache_.emplace(key, std::move(r)).first->second;
  }

  State apply(const FieldExpr& e, int n, const State& v) {
    State r;
    for (const auto& [id, c] : v) add_scaled(r, apply(e, n, id), c);
    return r;
  }

 private:
  State product(const FieldExpr& e, int n, std::uint32_t state, int lvl) {
    const FieldExpr& a = e.left();
    const FieldExpr& b = e.right();
    const int m = e.index();
    const int wa = max_weight(a), wb = max_weight(b);
    State r;
    if (wa == kNoWeight || wb == kNoWeight) return r;
    // b_{n+i} and a_i vanish on this state past these bounds
    int top1 = lvl + wb - 1 - n;
    int top2 = lvl + wa - 1;
    if (m >= 0) {
      top1 = std::min(top1, m);
      top2 = std::min(top2, m);
    }
    for (int i = 0; i <= top1; ++i) {
      Gaussian c = gbinomial(m, i);
      if (i % 2 != 0) c = -c;
      if (c.is_zero()) continue;
      const State t = apply(b, n + i, state);
      add_scaled(r, apply(a, m - i, t), c);
    }
    for (int i = 0; i <= top2; ++i) {
      Gaussian c = gbinomial(m, i);
      if ((i + m) % 2 == 0) c = -c;
      if (c.is_zero()) continue;
      const State t = apply(a, i, state);
      add_scaled(r, apply(b, m + n - i, t), c);
    }
    return r;
  }

  struct Key {
    const void* id;
    int n;
    std::uint32_t state;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return hash_mix(hash_mix(reinterpret_cast<std::size_t>(k.id),
                               static_cast<std::size_t>(k.n + 4096)),
                      k.state);
    }
  };

  const GradedModule& mod_;
  std::unordered_map<const void*, int> weight_;
  std::unordered_map<Key, State, KeyHash> cache_;
};

}  // namespace

SparseMatrix mode_of(const FieldExpr& expr, int n, const GradedModule& mod) {
  auto w = weight(mod.algebra(), expr);
  if (!w) throw DomainError("mode_of needs a homogeneous expression");
  const int N = mod.cutoff();
  if (n < *w - 1 - N || n > *w - 1 + N)
    throw CutoffError("mode " + std::to_string(n) + " of a weight-" + std::to_string(*w) +
                      " field maps no level up to " + std::to_string(N) +
                      " into the truncated module; raise the cutoff");
  FieldModes modes(mod);
  SparseMatrix m;
  m.rows = m.cols = mod.dim();
  for (std::uint32_t s = 0; s < mod.dim(); ++s) {
    const int target = mod.level(s) + *w - 1 - n;
    if (target < 0 || target > N) continue;
    for (const auto& [id, c] : modes.apply(expr, n, s))
      if (mod.level(id) <= N) m.entries.push_back({id, s, c});
  }
  return m;
}

OracleReport verify_against_symbolic(const NormalForm& nf, const FieldExpr& expr,
                                     const GradedModule& mod, int levels) {
  OracleReport rep;
  const FieldExpr nf_expr = to_expr(nf);
  FieldModes modes(mod);
  const int N = mod.cutoff();
  levels = std::min(levels, N);

  const auto we = weight(mod.algebra(), expr);
  const auto wn = mod.algebra().weight(nf);
  const int hi = std::max(modes.max_weight(expr), modes.max_weight(nf_expr));
  if (hi == kNoWeight) return rep;
  const int lo = (we && (wn || nf.is_zero())) ? std::min(*we, wn.value_or(*we)) : 0;

  for (std::uint32_t s = 0; s < mod.level_begin(levels + 1); ++s) {
    const int l = mod.level(s);
    for (int n = l + lo - 1 - N; n <= l + hi - 1; ++n) {
      State expected = mod.truncate(modes.apply(expr, n, s));
      State actual = mod.truncate(modes.apply(nf_expr, n, s));
      ++rep.checked;
      if (!(expected == actual)) {
        rep.mismatch = OracleMismatch{n, s, std::move(expected), std::move(actual)};
        return rep;
      }
    }
  }
  return rep;
}

std::string to_text(const GradedModule& mod, const State& v) {
  std::string out;
  for (const auto& [id, c] : v) {
    std::string term = c.is_one() ? "" : (-c).is_one() ? "-" : coeff_text(c) + "*";
    term += mod.label(id);
    if (out.empty())
      out = term;
    else if (term[0] == '-')
      out += " - " + term.substr(1);
    else
      out += " + " + term;
  }
  return out.empty() ? "0" : out;
}

}  // namespace vope
