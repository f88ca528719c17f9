#pragma once

#include "phyloci/ci_builder.hpp"

namespace phyloci {

struct VerifyReport {
  std::string check;
  std::string expected;
  std::string observed;
  double tol = 0.0;
  bool pass = false;
  std::vector<std::uint64_t> seeds;
  double runtime_ms = 0.0;
};

/// Generic no-evolution point: orbit coefficients uniform on [0.5, 1.5],
/// bounded away from the zero-coordinate degeneracy.
NoEvolutionPoint random_no_evolution(const ModelSpec& model, std::uint64_t seed);

/// Numeric dimension of CV_G(T): max over trials of the rank of the exact
/// Jacobian of Psi at random generic parameters (SVD, relative tolerance).
int numeric_dimension(const ModelSpec& model, const Tree& tree, int trials,
                      std::uint64_t seed = 0, double tol = 1e-8);

/// Max normalized residual of every equation at the point.
VerifyReport check_vanishing(const EquationSystem& system, const Tensor& p, double tol = 1e-8);

/// Gradient divided by its cofactor-magnitude bound; rows whose norm falls
/// below 1e-9 of the bound are structural zeros and come back as zero.
Vector normalized_gradient_row(const MinorEquation& eq, const Vector& coords, int dim);

/// Stacked-gradient matrix of the system at the given coordinates, rows
/// normalized by their cofactor bounds.
Matrix system_jacobian(const EquationSystem& system, const Vector& coords);

/// Numeric rank of the system Jacobian at a point (rows equilibrated).
int jacobian_rank_at(const EquationSystem& system, const Tensor& point, double tol = 1e-8);
int jacobian_rank_at_coords(const EquationSystem& system, const Vector& coords, double tol = 1e-8);

/// The claw d-tree hypothesis: re-express the claw set in the basis linked
/// to x0 | x1..x_{d-1}, remove the columns of S(u^k_{x0,i} ⊗ u^k_{...,j})
/// for i,j <= m_k, and check that the reduced Jacobian has rank equal to
/// codim(CV_G(T_d)) at `trials` random generic points of no evolution.
VerifyReport claw_hypothesis_check(const ModelSpec& model, int d, int trials,
                                   std::uint64_t seed = 0, double tol = 1e-8);

/// Smoothness witness at the no-evolution image of a claw tree: the rank of
/// the Psi Jacobian at (pi, I) must equal dim CV_G(T_d).
VerifyReport smoothness_probe(const ModelSpec& model, int claw_d, const NoEvolutionPoint& pt,
                              double tol = 1e-8);

/// Reduced-rank check for the GMM tripod: the Strassen-equation Jacobian in
/// the mixed basis (Fourier on slot 1, standard elsewhere) with the
/// A-bar ⊗ Y ⊗ Z columns removed has rank 24 at generic no-evolution points.
VerifyReport gmm_maxrank_check(int trials, std::uint64_t seed = 0, double tol = 1e-8);

/// Bridge matrix whose row j expresses standard coordinate j of ⊗^3 W as a
/// linear form over the mixed coordinates x-bar ⊗ Y ⊗ Z.
Matrix gmm_mixed_basis_bridge();

}  // namespace phyloci
