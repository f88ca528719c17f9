#pragma once

#include "phyloci/flattening.hpp"

namespace phyloci {

/// Symbolic layout of the 24x16 Strassen matrix f(tau): rows indexed
/// X_s ⊗ (X_r ∧ X_t) with r < t, columns X_i* ⊗ X_j; the entry is 0 when
/// j is not in {r,t}, -a_{ist} when r = j и a_{isr} when t = j.
struct StrassenLayout {
  int kappa = 4;

  struct RowId {
    int s, r, t;  // r < t
  };
  struct ColId {
    int i, j;
  };

  int num_rows() const { return kappa * kappa * (kappa - 1) / 2; }
  int num_cols() const { return kappa * kappa; }
  RowId row(int idx) const;
  ColId col(int idx) const;
  int row_index(int s, int r, int t) const;  // pair given unsorted
  int col_index(int i, int j) const { return i * kappa + j; }
  bool row_distinguished(int idx) const;
  bool col_distinguished(int idx) const;
  /// Coordinate index of the entry (0-based flat a_{xyz} index) and sign;
  /// coeff 0 when the cell is structurally zero.
  LinearForm entry(int row_idx, int col_idx) const;
};

StrassenLayout strassen_matrix_layout(int kappa = 4);

enum class ClawCoordKind { Standard, Fourier, SplitQ };

/// A built-in local complete intersection for a claw tree, in its declared
/// coordinate system (standard for GMM, Fourier for SS, split q-coordinates
/// of the split x0 | x1..x_{d-1} for JC).
struct ClawEquationSet {
  std::string model_name;
  int degree = 0;
  ClawCoordKind coords = ClawCoordKind::Standard;
  std::shared_ptr<const SplitBasis> claw_basis;  // SplitQ only
  int coord_dim = 0;
  std::vector<MinorEquation> equations;
  int codim = 0;

  /// Coordinates of a tensor in the declared system.
  Vector coords_of(const Tensor& p) const;
};

/// 24 order-13 minors of the Strassen matrix: all distinguished rows and
/// columns plus row X_s ⊗ (X_r ∧ X_t) and the diagonal column X_r* ⊗ X_r,
/// one equation per ordered triple of distinct states (r,s,t).
ClawEquationSet gmm_tripod_equations();

/// 12 order-13 minors of the 24x16 SSM matrix (the Strassen layout over
/// Fourier coordinates with odd-parity entries zeroed).  The SSM splits
/// into two parity blocks, so each minor selects rows and columns with a
/// matching 7+6 parity split; the fixed selections have reduced Jacobian
/// rank 12 at generic points of no evolution.
ClawEquationSet ss_tripod_equations();

/// The 6 nondistinguished SSM rows with nonzero entries in the diagonal
/// columns (letter triples with an even number of C,G-bar).
std::vector<int> ssm_qualifying_rows();

/// The single cubic Q4_11 Q4_12 Q1_12 - Q1_11 (Q4_13)^2 in the coordinates
/// of the basis linked to the split x0 | x1 x2.
ClawEquationSet jc_tripod_equation();

/// Registry lookup; throws "claw equations unavailable" on a miss.
const ClawEquationSet& claw_set(const ModelSpec& model, int d);
bool claw_set_available(const ModelSpec& model, int d);

}  // namespace phyloci
