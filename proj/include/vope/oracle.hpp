#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "vope/algebra.hpp"
#include "vope/expr.hpp"
#include "vope/normal_form.hpp"
#include "vope/scalar.hpp"

namespace vope {

using Bindings = std::map<std::string, Gaussian>;

/// Eigenvalues of the zero modes G_{wt(G)-1} on the highest-weight vector,
/// by generator name. Unlisted generators act by 0. Modes that lower the
/// level annihilate it; modes that raise it create the basis.
struct HighestWeight {
  std::map<std::string, Gaussian> zero_mode;

  static HighestWeight vacuum() { return {}; }
  /// Virasoro Verma module M(c, h): L_0 = T_1 acts by h.
  static HighestWeight virasoro(Gaussian h) { return {{{"T", std::move(h)}}}; }
};

/// A(z) = sum_n A_n z^{-n-1}; A_n shifts the level by wt(A) - 1 - n.
struct Mode {
  std::uint32_t gen;
  int n;
  friend auto operator<=>(const Mode&, const Mode&) = default;
};

/// Sparse vector over the PBW basis, keyed by state id.
using State = std::map<std::uint32_t, Gaussian>;

struct SparseMatrix {
  std::size_t rows = 0, cols = 0;
  struct Entry {
    std::size_t row, col;
    Gaussian value;
  };
  std::vector<Entry> entries;  ///< column-major, rows ascending within a column

  bool is_zero() const { return entries.empty(); }
  /// Entry (row, col), zero when absent.
  Gaussian at(std::size_t row, std::size_t col) const;
};

/// Highest-weight module of an algebra at concrete parameter values, with
/// an ordered PBW basis up to a level cutoff. Mode actions are exact at
/// every level; states above the cutoff are created on demand and only
/// matrices are truncated. Caches make this class not thread-safe.
class GradedModule {
 public:
  const Algebra& algebra() const { return alg_; }
  const Bindings& bindings() const { return bindings_; }
  int cutoff() const { return cutoff_; }

  /// Basis states of levels 0..cutoff carry ids 0..dim()-1, level by level.
  std::size_t dim() const { return level_start_.back(); }
  std::size_t dim(int level) const { return level_start_[level + 1] - level_start_[level]; }
  std::size_t level_begin(int level) const { return level_start_[level]; }
  int level(std::uint32_t state) const { return levels_[state]; }
  /// E.g. `T_{0} T_{0}|hw>`, leftmost mode applied last.
  std::string label(std::uint32_t state) const;

  /// G_n on a basis state.
  const State& apply(Mode x, std::uint32_t state) const;
  State apply(Mode x, const State& v) const;

  /// G_n restricted to levels <= cutoff.
  SparseMatrix matrix(Mode x) const;
  /// Keeps the components of level <= cutoff.
  State truncate(const State& v) const;

  /// Bindings, cutoff, basis labels and the matrices of every generator mode
  /// that acts nontrivially within the cutoff, values as strings.
  nlohmann::json to_json() const;

 private:
  friend GradedModule build_module(const Algebra&, const Bindings&, const HighestWeight&, int);

  // [a_m, b_n] = constant + sum of coefficient * mode
  struct Bracket {
    Gaussian constant;
    std::vector<std::pair<Mode, Gaussian>> modes;
  };
  // a_(i) b as (generator, derivative order, coefficient) plus identity part
  struct LinearOpe {
    Gaussian identity;
    std::vector<std::tuple<std::uint32_t, int, Gaussian>> letters;
  };

  GradedModule(Algebra alg, Bindings b, int cutoff) : alg_(std::move(alg)), bindings_(std::move(b)), cutoff_(cutoff) {}

  int shift(Mode x) const { return alg_.weight(x.gen) - 1 - x.n; }
  // order key: larger shifts first, then generator index
  bool mode_before(Mode x, Mode y) const;
  std::uint32_t intern(std::vector<Mode> word) const;
  Bracket bracket(Mode x, Mode y) const;
  void add_apply(State& out, Mode x, std::uint32_t state, const Gaussian& c) const;
  void enumerate(int level, std::vector<Mode>& prefix, int remaining,
                 const std::vector<Mode>& creators, std::size_t from);

  struct ApplyKey {
    Mode x;
    std::uint32_t state;
    friend bool operator==(const ApplyKey&, const ApplyKey&) = default;
  };
  struct ApplyKeyHash {
    std::size_t operator()(const ApplyKey& k) const {
      return hash_mix(hash_mix(k.x.gen, static_cast<std::size_t>(k.x.n + 4096)), k.state);
    }
  };

  Algebra alg_;
  Bindings bindings_;
  int cutoff_;
  std::vector<std::size_t> level_start_;
  std::vector<Gaussian> zero_mode_;                  // by generator
  std::vector<std::vector<LinearOpe>> ope_;          // [a * n + b][i]
  mutable std::vector<std::vector<Mode>> words_;     // by state id, x_1 x_2 ... |hw>
  mutable std::vector<int> levels_;
  mutable std::map<std::vector<Mode>, std::uint32_t> word_ids_;
  mutable std::unordered_map<ApplyKey, State, ApplyKeyHash> apply_cache_;
};

/// Builds the module with highest-weight data `hw` and cutoff N in [0, 10].
/// Throws DomainError when a binding is missing, makes a table denominator
/// vanish, or the zero-mode data is inconsistent with the brackets, and
/// AlgebraError when the OPE table is not linear in the generators.
GradedModule build_module(const Algebra& alg, const Bindings& bindings, const HighestWeight& hw,
                          int cutoff);

/// Matrix of (expr)_n on the truncated basis. Throws DomainError for an
/// inhomogeneous expression and CutoffError when (expr)_n maps no level
/// within the cutoff to another.
SparseMatrix mode_of(const FieldExpr& expr, int n, const GradedModule& mod);

struct OracleMismatch {
  int n;
  std::uint32_t state;  ///< source basis state
  State expected;       ///< from the expression
  State actual;         ///< from the normal form
};

struct OracleReport {
  std::optional<OracleMismatch> mismatch;  ///< the first one found
  std::size_t checked = 0;                 ///< (n, state) pairs compared

  bool ok() const { return !mismatch; }
};

/// Compares the modes of `nf` and `expr` on every basis state up to level
/// `levels` (at most the cutoff), for every n that maps such a state into
/// the truncated module. States are scanned in basis order, n ascending.
OracleReport verify_against_symbolic(const NormalForm& nf, const FieldExpr& expr,
                                     const GradedModule& mod, int levels);

/// Text of a state: `2*T_{0}|hw> - 1/2*T_{-1}|hw>`, `0` when empty.
std::string to_text(const GradedModule& mod, const State& v);

}  // namespace vope
