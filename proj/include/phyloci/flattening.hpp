#pragma once

#include "phyloci/split_basis.hpp"

namespace phyloci {

/// Sparse linear form over a coordinate vector.
struct LinearForm {
  std::vector<std::pair<int, Complex>> terms;
  Complex constant{0.0, 0.0};

  bool empty() const { return terms.empty() && constant == Complex(0.0, 0.0); }
  Complex eval(const Vector& coords) const {
    Complex acc = constant;
    for (const auto& [idx, c] : terms) acc += c * coords(idx);
    return acc;
  }
  static LinearForm coordinate(int idx, Complex coeff = 1.0) {
    LinearForm f;
    f.terms.push_back({idx, coeff});
    return f;
  }
};

/// An evaluable polynomial: the determinant of a selected submatrix of a
/// structured matrix whose entries are linear forms in the coordinates
/// (single signed coordinates for the primitive equation sets; fixed linear
/// combinations after a change of coordinate space).  Minors are never
/// expanded symbolically.
struct MinorEquation {
  std::string id;
  std::string provenance;   // "edge", "clawA", "clawB"
  std::string matrix_ref;   // "thinflat:k", "strassen", "ssm", "jc_tripod"
  std::vector<int> rows, cols;
  int size = 0;
  std::vector<std::vector<LinearForm>> entries;  // size x size

  Matrix instantiate(const Vector& coords) const;
  Complex evaluate(const Vector& coords) const;
  /// Analytic gradient via the cofactor rule d det / d entry = cofactor.
  Vector gradient(const Vector& coords, int coord_dim) const;
  /// Magnitude bound sum |cofactor|*|coeff| over the variable cells; a
  /// gradient whose norm is tiny against this bound is a structural zero.
  double gradient_scale(const Vector& coords) const;
  /// Normalization for vanishing tests: max(1, ||submatrix||_F^size).
  double scale(const Vector& coords) const;
  /// Rewrites the equation over a new coordinate space: old coordinate j is
  /// the linear form given by row j of `bridge` (old_dim x new_dim).
  MinorEquation composed_with(const Matrix& bridge) const;
};

/// Per-irrep matrices M_k of the thin flattening, with the distinguished
/// top-left m_{k*} x m_k block M_k^0.
struct ThinFlattening {
  struct BlockMatrix {
    int k = 0;
    int mk = 0;  // multiplicity of N_k in W (distinguished block size)
    Matrix m;
  };
  std::vector<BlockMatrix> blocks;
};

ThinFlattening thin_flatten(const Tensor& p, const SplitBasis& basis);

/// The distinguished (m_{k*}+1) x (m_k+1) minors E^k_{ij} of the thin
/// flattening that contain M_k^0, ordered by k, then i, then j.
std::vector<MinorEquation> edge_invariant_set(const SplitBasis& basis);

/// Expected count: sum_k (m_{k*}(a)-m_{k*})(m_k(b)-m_k).
long edge_invariant_count(const ModelSpec& model, int a, int b);

struct FlatteningRankReport {
  struct PerIrrep {
    int k = 0;
    int mk = 0;
    int rank = 0;
    RealVector singular_values;
  };
  std::vector<PerIrrep> per_irrep;
  bool split_compatible = false;
};

/// SVD rank of every block; the split is compatible iff rank_k <= m_k for
/// all k.  tol is relative to the top singular value (default 1e-9).
FlatteningRankReport flattening_ranks(const Tensor& p, const SplitBasis& basis, double tol = 1e-9);

}  // namespace phyloci
