#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vope/normal_form.hpp"
#include "vope/scalar.hpp"

namespace vope {

struct GeneratorDecl {
  std::string name;
  int weight = 1;  ///< conformal weight, >= 1
};

/// One nonzero singular OPE coefficient: left_(index) right = value.
struct OpeEntry {
  std::string left;
  std::string right;
  int index = 0;
  NormalForm value;
};

/// Structure constants of a finite-dimensional Lie algebra in the
/// convention g^{ab} = delta^{ab}/2, g_{ab} = 2 delta_{ab}.
struct LieData {
  std::string name;
  int dim = 0;
  int dual_coxeter = 0;
  std::vector<Scalar> f;  ///< f^{abc} at (a*dim + b)*dim + c, 0-based

  const Scalar& at(int a, int b, int c) const {
    return f[(static_cast<std::size_t>(a) * dim + b) * dim + c];
  }
};

/// Throws AlgebraError naming the failed identity (antisymmetry, Jacobi,
/// normalization) and the 1-based indices where it fails.
void validate_lie_data(const std::vector<Scalar>& f, int dim, int dual_coxeter);

/// Immutable field algebra: parameters, generators and the singular part of
/// every generator-pair OPE.
class Algebra {
 public:
  /// Validates and builds. Errors (AlgebraError): duplicate or invalid
  /// generator, unknown generator in an entry, duplicate entry,
  /// weight-inconsistent entry, invalid Lie data.
  static Algebra define(ParamSpacePtr params, std::vector<GeneratorDecl> generators,
                        const std::vector<OpeEntry>& table,
                        std::optional<LieData> lie = std::nullopt);

  const ParamSpacePtr& params() const { return params_; }
  const std::vector<GeneratorDecl>& generators() const { return gens_; }
  std::size_t size() const { return gens_.size(); }
  const std::string& name(std::uint32_t g) const { return gens_[g].name; }
  /// Index of generator `name`, or -1.
  int generator_index(std::string_view name) const;
  const std::optional<LieData>& lie() const { return lie_; }

  int weight(std::uint32_t g) const { return gens_[g].weight; }
  int weight(const Letter& x) const { return gens_[x.gen].weight + static_cast<int>(x.deriv); }
  int weight(const Monomial& m) const;
  /// Common weight of all terms; nullopt if zero or inhomogeneous.
  std::optional<int> weight(const NormalForm& nf) const;
  /// Largest term weight, -1 for zero.
  int max_weight(const NormalForm& nf) const;

  /// a_(i) b from the table; the zero form when absent.
  const NormalForm& ope(std::uint32_t a, std::uint32_t b, int i) const;
  /// 1 + largest i with a nonzero entry, 0 for a regular pair.
  int max_pole(std::uint32_t a, std::uint32_t b) const;

  /// All nonzero entries in (left, right, index) order.
  std::vector<OpeEntry> entries() const;

 private:
  Algebra() = default;

  ParamSpacePtr params_;
  std::vector<GeneratorDecl> gens_;
  std::vector<std::vector<NormalForm>> table_;  // [a * n + b][i]
  std::optional<LieData> lie_;
};

/// Virasoro: T of weight 2, parameter c; T_(3)T = (c/2) I, T_(1)T = 2T,
/// T_(0)T = dT.
Algebra preset_virasoro();

/// Heisenberg (free boson): J of weight 1 with J_(1)J = I.
Algebra preset_free_boson();

/// Affine current algebra at symbolic level k. Generators J^1..J^dim of
/// weight 1 with J^a_(1)J^b = (k/2) delta^{ab} I and
/// J^a_(0)J^b = i f^{ab}_c J^c, f^{ab}_c = 2 f^{abc}.
Algebra preset_current_algebra(const std::vector<Scalar>& f, int dim, int dual_coxeter,
                               std::string lie_name = "custom");

/// f^{abc} = epsilon^{abc}/2: the su(2) constants normalized for h = 2.
std::vector<Scalar> su2_structure_constants();
Algebra preset_su2();

}  // namespace vope
