#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phyloci/common.hpp"

namespace phyloci {

/// A permutation of the state set {0,...,kappa-1}, stored as the image list.
struct Permutation {
  std::vector<int> images;

  static Permutation identity(int kappa);

  int degree() const { return static_cast<int>(images.size()); }
  int operator()(int i) const { return images[i]; }

  /// Composition acting left: (a.then(b))(x) = b(a(x)) is NOT this.
  /// compose(other) returns this∘other, i.e. x -> this(other(x)).
  Permutation compose(const Permutation& other) const;
  Permutation inverse() const;

  int fixed_points() const;
  int order() const;
  /// Sorted cycle lengths, e.g. (AC)(GT) on 4 states -> {2,2}.
  std::vector<int> cycle_type() const;

  bool operator==(const Permutation& o) const { return images == o.images; }
  bool operator<(const Permutation& o) const { return images < o.images; }
};

/// A permutation group on kappa states with conjugacy classes and an
/// (optional) character table.  Rows of the table are irreducible
/// characters, columns are conjugacy classes; row 0 is the trivial
/// character and column 0 is the identity class.
struct PermGroup {
  int kappa = 0;
  std::vector<Permutation> elements;  // sorted lexicographically; id first
  std::vector<Permutation> generators;
  std::vector<std::vector<int>> classes;  // element indices per class
  std::vector<int> class_of;              // element index -> class index
  bool has_char_table = false;
  Matrix char_table;            // t x #classes
  std::vector<int> irrep_dims;  // n_k = chi_k(id)
  std::vector<int> dual_index;  // k -> k* with chi_{k*} = conj(chi_k)

  int order() const { return static_cast<int>(elements.size()); }
  int num_irreps() const { return static_cast<int>(irrep_dims.size()); }
  int element_index(const Permutation& p) const;
  /// chi_k evaluated on element g (by element index).
  Complex character(int k, int elem) const;
  /// Fixed points of the class representative, one per class.
  std::vector<int> class_fixed_points() const;
};

enum class BuiltinModel { GMM, JC, K2, K3, SS, Custom };

/// An equivariant model: a permutation group plus matrix realizations of its
/// irreducible representations (needed for equation construction).
struct ModelSpec {
  std::string name;
  BuiltinModel kind = BuiltinModel::Custom;
  PermGroup group;
  /// irrep_matrices[k][e] is the n_k x n_k matrix of element e in irrep k.
  std::vector<std::vector<Matrix>> irrep_matrices;

  bool has_irreps() const { return !irrep_matrices.empty(); }
  int kappa() const { return group.kappa; }
};

/// Closure of the generators under composition.  When the resulting group
/// equals one of the five built-in model groups, the built-in character
/// table is attached; otherwise the table must be supplied separately
/// (dimension-only mode works without one).
PermGroup enumerate_group(const std::vector<Permutation>& generators, int kappa);

/// Case-insensitive lookup of "GMM", "JC", "K2", "K3", "SS".
ModelSpec builtin_model(const std::string& name);

/// Multiplicity vector m(s) of the decomposition of the s-th tensor power of
/// the permutation representation: m_k(s) = (1/|G|) sum_g conj(chi_k(g)) fix(g)^s.
IntVector multiplicities(const ModelSpec& model, int s);

/// m_1(s) from fixed-point counting alone; works without a character table.
long m1_of(const PermGroup& group, int s);

/// One 0/1 indicator matrix per orbit of G on Sigma x Sigma; these span
/// Hom_G(W,W).  Matrices are listed with diagonal orbits first, each orbit
/// keyed by its lexicographically least cell.
std::vector<RealMatrix> equivariant_hom_basis(const ModelSpec& model);

/// Orbits of G on Sigma (used for the invariant root distribution).
std::vector<std::vector<int>> state_orbits(const PermGroup& group);

/// Matrices rho_k(g) for every group element, in element order.
const std::vector<Matrix>& irrep_realization(const ModelSpec& model, int k);

/// Basis of Hom_G(N_k, ⊗^s W): the nullspace of the equivariance
/// constraints over the generators, orthonormalized deterministically by
/// lexicographic pivot order of the standard tensor basis.
std::vector<Matrix> hom_space(const ModelSpec& model, int k, int s);

/// Index permutation of ⊗^s W induced by g: result[i] is the index that i
/// maps to, i.e. (g·t)[perm[i]] = t[i].
std::vector<int> tensor_index_permutation(const Permutation& g, int s);

}  // namespace phyloci
