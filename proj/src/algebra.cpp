#include "vope/algebra.hpp"

#include <algorithm>
#include <cctype>

#include "vope/error.hpp"

namespace vope {

namespace {

std::string triple_str(int a, int b, int c) {
  return "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "," + std::to_string(c + 1) +
         ")";
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  if (name == "I" || name == "d" || name == "sum" || name == "i") return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  std::size_t k = 0;
  while (k < name.size() && (std::isalnum(static_cast<unsigned char>(name[k])) || name[k] == '_' ||
                             name[k] == '\''))
    ++k;
  if (k == name.size()) return true;
  // optional index suffix ^digits
  if (name[k] != '^' || k + 1 == name.size()) return false;
  for (std::size_t j = k + 1; j < name.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(name[j]))) return false;
  return true;
}

}  // namespace

void validate_lie_data(const std::vector<Scalar>& f, int dim, int dual_coxeter) {
  if (dim < 1) throw AlgebraError("Lie algebra dimension must be positive");
  const auto n = static_cast<std::size_t>(dim);
  if (f.size() != n * n * n)
    throw AlgebraError("expected " + std::to_string(n * n * n) + " structure constants, got " +
                       std::to_string(f.size()));
  auto at = [&](int a, int b, int c) -> const Scalar& {
    return f[(static_cast<std::size_t>(a) * n + b) * n + c];
  };
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c) {
        if (!(at(a, b, c) == -at(b, a, c)))
          throw AlgebraError("antisymmetry fails: f" + triple_str(a, b, c) + " != -f" +
                             triple_str(b, a, c));
        if (!(at(a, b, c) == -at(a, c, b)))
          throw AlgebraError("antisymmetry fails: f" + triple_str(a, b, c) + " != -f" +
                             triple_str(a, c, b));
      }
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int d = 0; d < dim; ++d) {
          Scalar s;
          for (int e = 0; e < dim; ++e)
            s += at(a, b, e) * at(e, c, d) + at(b, c, e) * at(e, a, d) + at(c, a, e) * at(e, b, d);
          if (!s.is_zero())
            throw AlgebraError("Jacobi identity fails at (a,b,c,d)=(" + std::to_string(a + 1) +
                               "," + std::to_string(b + 1) + "," + std::to_string(c + 1) + "," +
                               std::to_string(d + 1) + ")");
        }
  // sum_{a,b} f^{abc} f_{abd} = 2 h delta^c_d with f_{abd} = 8 f^{abd}
  for (int c = 0; c < dim; ++c)
    for (int d = 0; d < dim; ++d) {
      Scalar s;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) s += at(a, b, c) * at(a, b, d);
      s *= Scalar(8);
      Scalar expected = c == d ? Scalar(2L * dual_coxeter) : Scalar(0);
      if (!(s == expected))
        throw AlgebraError("normalization fails at (c,d)=(" + std::to_string(c + 1) + "," +
                           std::to_string(d + 1) + "): sum f^{abc} f_{abd} = " + s.to_string() +
                           ", expected " + expected.to_string());
    }
}

Algebra Algebra::define(ParamSpacePtr params, std::vector<GeneratorDecl> generators,
                        const std::vector<OpeEntry>& table, std::optional<LieData> lie) {
  Algebra alg;
  alg.params_ = params ? std::move(params) : std::make_shared<const ParamSpace>(
                                                 std::vector<std::string>{});
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const auto& g = generators[i];
    if (!valid_name(g.name)) throw AlgebraError("invalid generator name '" + g.name + "'");
    if (g.weight < 1)
      throw AlgebraError("generator '" + g.name + "' must have weight >= 1, got " +
                         std::to_string(g.weight));
    if (alg.params_->index_of(g.name) >= 0)
      throw AlgebraError("generator '" + g.name + "' clashes with a parameter");
    for (std::size_t j = 0; j < i; ++j)
      if (generators[j].name == g.name) throw AlgebraError("duplicate generator '" + g.name + "'");
  }
  alg.gens_ = std::move(generators);
  const std::size_t n = alg.gens_.size();
  alg.table_.assign(n * n, {});

  for (const auto& e : table) {
    const std::string where =
        "(" + e.left + "," + e.right + "," + std::to_string(e.index) + ")";
    int a = alg.generator_index(e.left);
    int b = alg.generator_index(e.right);
    if (a < 0) throw AlgebraError("unknown generator '" + e.left + "' in OPE entry " + where);
    if (b < 0) throw AlgebraError("unknown generator '" + e.right + "' in OPE entry " + where);
    if (e.index < 0) throw AlgebraError("OPE entry " + where + " must have index >= 0");
    const int expected = alg.gens_[a].weight + alg.gens_[b].weight - e.index - 1;
    for (const auto& [m, c] : e.value.terms()) {
      for (const auto& x : m.letters())
        if (x.gen >= n)
          throw AlgebraError("OPE entry " + where + " references an undeclared generator");
      const int w = alg.weight(m);
      if (w != expected)
        throw AlgebraError("weight-inconsistent OPE entry " + where + ": expected weight " +
                           std::to_string(expected) + ", found " + std::to_string(w));
    }
    auto& slot = alg.table_[static_cast<std::size_t>(a) * n + b];
    if (slot.size() <= static_cast<std::size_t>(e.index)) slot.resize(e.index + 1);
    if (!slot[e.index].is_zero()) throw AlgebraError("duplicate OPE entry " + where);
    slot[e.index] = e.value;
  }
  for (auto& slot : alg.table_)
    while (!slot.empty() && slot.back().is_zero()) slot.pop_back();

  if (lie) validate_lie_data(lie->f, lie->dim, lie->dual_coxeter);
  alg.lie_ = std::move(lie);
  return alg;
}

int Algebra::generator_index(std::string_view name) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].name == name) return static_cast<int>(i);
  return -1;
}

int Algebra::weight(const Monomial& m) const {
  int w = 0;
  for (const auto& x : m.letters()) w += weight(x);
  return w;
}

std::optional<int> Algebra::weight(const NormalForm& nf) const {
  std::optional<int> w;
  for (const auto& [m, c] : nf.terms()) {
    int wm = weight(m);
    if (w && *w != wm) return std::nullopt;
    w = wm;
  }
  return w;
}

int Algebra::max_weight(const NormalForm& nf) const {
  int w = -1;
  for (const auto& [m, c] : nf.terms()) w = std::max(w, weight(m));
  return w;
}

const NormalForm& Algebra::ope(std::uint32_t a, std::uint32_t b, int i) const {
  static const NormalForm zero;
  if (i < 0) return zero;
  const auto& slot = table_[static_cast<std::size_t>(a) * gens_.size() + b];
  return static_cast<std::size_t>(i) < slot.size() ? slot[i] : zero;
}

int Algebra::max_pole(std::uint32_t a, std::uint32_t b) const {
  return static_cast<int>(table_[static_cast<std::size_t>(a) * gens_.size() + b].size());
}

std::vector<OpeEntry> Algebra::entries() const {
  std::vector<OpeEntry> out;
  const std::size_t n = gens_.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const auto& slot = table_[a * n + b];
      for (std::size_t i = 0; i < slot.size(); ++i)
        if (!slot[i].is_zero())
          out.push_back(OpeEntry{gens_[a].name, gens_[b].name, static_cast<int>(i), slot[i]});
    }
  return out;
}

Algebra preset_virasoro() {
  auto space = std::make_shared<const ParamSpace>(std::vector<std::string>{"c"});
  const Letter t{0, 0};
  std::vector<OpeEntry> table{
      {"T", "T", 3, NormalForm::identity(Scalar::param(space, "c") / Scalar(2))},
      {"T", "T", 1, NormalForm::letter(t, Scalar(2))},
      {"T", "T", 0, NormalForm::letter(Letter{0, 1})},
  };
  return Algebra::define(space, {{"T", 2}}, table);
}

Algebra preset_free_boson() {
  return Algebra::define(nullptr, {{"J", 1}}, {{"J", "J", 1, NormalForm::identity()}});
}

Algebra preset_current_algebra(const std::vector<Scalar>& f, int dim, int dual_coxeter,
                               std::string lie_name) {
  validate_lie_data(f, dim, dual_coxeter);
  auto space = std::make_shared<const ParamSpace>(std::vector<std::string>{"k"});
  const Scalar k = Scalar::param(space, "k");
  std::vector<GeneratorDecl> gens;
  for (int a = 1; a <= dim; ++a) gens.push_back({"J^" + std::to_string(a), 1});
  std::vector<OpeEntry> table;
  const auto n = static_cast<std::size_t>(dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      if (a == b) table.push_back({gens[a].name, gens[b].name, 1, NormalForm::identity(k / 2)});
      NormalForm v;
      for (int c = 0; c < dim; ++c) {
        const Scalar& fabc = f[(a * n + b) * n + c];
        if (!fabc.is_zero())
          v.add_term(Monomial(Letter{static_cast<std::uint32_t>(c), 0}),
                     Scalar::imaginary_unit() * Scalar(2) * fabc);
      }
      if (!v.is_zero()) table.push_back({gens[a].name, gens[b].name, 0, v});
    }
  return Algebra::define(space, std::move(gens), table,
                         LieData{std::move(lie_name), dim, dual_coxeter, f});
}

std::vector<Scalar> su2_structure_constants() {
  std::vector<Scalar> f(27);
  auto set = [&](int a, int b, int c, long sign) { f[(a * 3 + b) * 3 + c] = Scalar::rational(sign, 2); };
  set(0, 1, 2, 1);
  set(1, 2, 0, 1);
  set(2, 0, 1, 1);
  set(1, 0, 2, -1);
  set(2, 1, 0, -1);
  set(0, 2, 1, -1);
  return f;
}

Algebra preset_su2() { return preset_current_algebra(su2_structure_constants(), 3, 2, "su2"); }

}  // namespace vope
