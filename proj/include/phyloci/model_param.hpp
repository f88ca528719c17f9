#pragma once

#include <optional>

#include "phyloci/tensor.hpp"
#include "phyloci/tree.hpp"

namespace phyloci {

/// Equivariant Markov parameters: the root distribution on the orbit basis
/// of the state set, and one matrix per edge on the equivariant hom basis.
/// Edges are listed in the canonical order of `canonical_edges` (directed
/// away from the default root).
struct Parameters {
  Vector pi_coeffs;                  // per state orbit
  std::vector<Vector> edge_coeffs;   // per canonical edge, per hom-basis orbit
  bool stochastic = false;

  Vector pi(const ModelSpec& model) const;                 // length kappa
  Matrix edge_matrix(const ModelSpec& model, int e) const; // kappa x kappa
};

/// Edges directed away from the default root, in DFS discovery order.
std::vector<std::pair<int, int>> canonical_edges(const Tree& tree);

/// Reference blend for near-identity sampling: keeps draws inside the
/// neighborhood of the no-evolution points where the local systems apply.
inline constexpr double kDefaultNearIdentity = 0.2;

struct SampleOptions {
  bool stochastic = false;
  std::optional<double> near_identity;  // blend A = (1-eps) Id + eps R
  bool complex_entries = false;
};

/// Coefficients drawn uniformly from [-1,1] (plus i[-1,1] when requested) on
/// the orbit/hom bases, with rejection resampling until the genericity
/// conditions hold: no zero entry of pi, nonsingular matrices, det != ±1.
/// near_identity = 0 returns identity matrices exactly (no rejection).
Parameters random_parameters(const ModelSpec& model, const Tree& tree, std::uint64_t seed,
                             const SampleOptions& options = {});

/// Joint distribution tensor at the leaves, by leaf-to-root dynamic
/// programming over the tree rooted at the default root.
Tensor evaluate_psi(const ModelSpec& model, const Tree& tree, const Parameters& params);

/// Same image computed with the root moved to `root_vertex`; matrices on
/// re-oriented edges are transposed.
Tensor evaluate_psi_rooted(const ModelSpec& model, const Tree& tree, const Parameters& params,
                           int root_vertex);

/// Jacobian of evaluate_psi with respect to the parameter coefficients
/// (pi coefficients first, then per-edge coefficients in canonical order).
/// Psi is linear in pi and in each edge's coefficients, so the columns are
/// exact: each is Psi with one factor replaced by a basis element.
Matrix psi_jacobian(const ModelSpec& model, const Tree& tree, const Parameters& params);

/// Central-difference Jacobian (cross-check; h = 1e-5 * (1 + |x|)).
Matrix psi_jacobian_fd(const ModelSpec& model, const Tree& tree, const Parameters& params,
                       double h_scale = 1e-5);

}  // namespace phyloci
