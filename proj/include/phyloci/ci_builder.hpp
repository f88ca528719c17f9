#pragma once

#include "phyloci/claw_equations.hpp"
#include "phyloci/model_param.hpp"

namespace phyloci {

/// The assembled local complete intersection eq_T = eq_A ∪ eq_B ∪ eq_{A|B}.
/// Equations live over one coordinate space: the split basis of the
/// outermost cherry split, or the claw set's declared coordinates when the
/// tree is a claw. Subtree equations are re-expressed by exact composed
/// linear bridges (marginalization followed by the subtree's coordinate
/// functionals), never re-fit numerically.
struct EquationSystem {
  std::shared_ptr<const ModelSpec> model;
  int n = 0;
  ClawCoordKind coord_kind = ClawCoordKind::Standard;
  std::shared_ptr<const SplitBasis> basis;  // SplitQ only
  int coord_dim = 0;
  std::vector<MinorEquation> equations;

  struct LevelCounts {
    int n_leaves = 0;
    int claw_a = 0;
    int claw_b = 0;
    int edge = 0;
  };
  std::vector<LevelCounts> counts;  // outermost level first

  /// Normalization permutation: new slot i holds the original leaf
  /// slot_of_new[i-1] (identity for claw trees).
  std::vector<int> slot_of_new;

  Vector coords_of(const Tensor& p) const;

  int count(const std::string& provenance) const;
};

/// codim CV_G(T) = m_1(n) - |E(T)| (m_1(2) - m_1) - m_1.
long codimension(const ModelSpec& model, const Tree& tree);

/// dim CV_G(T) = |E(T)| (m_1(2) - m_1) + m_1 (the cone over V_G(T)).
long cone_dimension(const ModelSpec& model, const Tree& tree);

long ambient_dimension(const ModelSpec& model, const Tree& tree);

/// Rewrites an equation over a parent coordinate space. Row j of `bridge`
/// expresses subtree coordinate j as a linear form over parent coordinates.
MinorEquation extend_equation(const MinorEquation& eq, const Matrix& bridge);

/// Recursive assembly along the peel schedule. Throws if some interior
/// degree has no registered claw set, naming the missing (model, d) pairs.
EquationSystem build_ci(const ModelSpec& model, const Tree& tree);

}  // namespace phyloci
