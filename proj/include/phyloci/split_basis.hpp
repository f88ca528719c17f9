#pragma once

#include <memory>

#include "phyloci/tensor.hpp"
#include "phyloci/tree.hpp"

namespace phyloci {

/// Basis of the F_k slice of ⊗^size W for one side of a split. The first
/// `embedded` vectors are the 1-padded images of the fixed F_k(W) basis
/// (1^(size-1) ⊗ u on the A side, u ⊗ 1^(size-1) on the B side); the rest
/// complete them to a basis of the slice, ordered by the lexicographic index
/// of their leading Fourier (resp. standard) coordinate.
struct FSliceBasis {
  int k = 0;
  bool a_side = false;
  int size = 0;
  int embedded = 0;
  std::vector<Tensor> vectors;
};

FSliceBasis f_slice_basis(const ModelSpec& model, bool a_side, int size, int k);

/// The averaging form of the S operator:
/// S(uA ⊗ uB) = (n_k/|G|) sum_g (g uA) ⊗ (g uB).
/// For 1-dimensional irreps this equals uA ⊗ uB exactly.
Tensor s_operator(const ModelSpec& model, int k, const Tensor& uA, const Tensor& uB);

/// The basis B_{A|B} of (⊗^n W)^G linked to an edge split, with entries
/// S(u^{k*}_{A,i} ⊗ u^k_{B,j}) ordered by (k, i, j). Entry tensors are
/// stored in the original leaf-slot order of the split's label sets.
class SplitBasis {
 public:
  struct Block {
    int k = 0;       // irrep index (0-based)
    int rows = 0;    // m_{k*}(a)
    int cols = 0;    // m_k(b)
    int mk = 0;      // multiplicity of N_k in W
    int offset = 0;  // first entry index of this block
  };

  std::shared_ptr<const ModelSpec> model;
  int n = 0, a = 0, b = 0;
  EdgeSplit split;
  std::vector<Block> blocks;
  std::vector<Tensor> entries;
  double condition_number = 0.0;

  int dimension() const { return static_cast<int>(entries.size()); }
  const Block& block(int k) const;
  bool has_block(int k) const;
  /// Entry index of q^k_{ij} (i, j are 1-based as displayed).
  int index_of(int k, int i, int j) const;
  /// Inverse lookup: (k, i, j) of a flat entry index (i, j 1-based).
  void coords_of_index(int idx, int& k, int& i, int& j) const;

  Vector to_q(const Tensor& p) const;
  Tensor from_q(const Vector& q) const;

 private:
  friend SplitBasis build_split_basis(const ModelSpec&, int, const EdgeSplit&);
  Matrix basis_matrix_;  // kappa^n x dimension
  Eigen::ColPivHouseholderQR<Matrix> qr_;
};

/// Runs the basis algorithm for the given split. |A| = 1 is permitted only
/// for the claw layout 1|rest used internally by the claw equation sets.
SplitBasis build_split_basis(const ModelSpec& model, int n, const EdgeSplit& split);

/// Convenience: the split {1..a} | {a+1..n}.
EdgeSplit contiguous_split(int n, int a);

Vector to_q_coords(const Tensor& p, const SplitBasis& basis);
Tensor from_q_coords(const Vector& q, const SplitBasis& basis);

}  // namespace phyloci
