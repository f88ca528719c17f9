#pragma once

#include "phyloci/common.hpp"
#include "phyloci/perm_rep.hpp"

namespace phyloci {

/// Dense complex tensor in ⊗^n W, stored row-major with leaf 1 most
/// significant: index(X1...Xn) = sum_i x_i * kappa^(n-i).
struct Tensor {
  int kappa = 4;
  int n = 0;
  Vector data;

  static Tensor zeros(int kappa, int n);

  long size() const { return data.size(); }
  long index_of(const std::vector<int>& states) const;
  Complex& at(const std::vector<int>& states) { return data(index_of(states)); }
  Complex at(const std::vector<int>& states) const { return data(index_of(states)); }
};

/// Hard cap on dense storage: kappa^n <= 4^13.
constexpr long kMaxTensorSize = 1L << 26;

struct NoEvolutionPoint {
  Vector pi;  // per-state entries, required G-invariant
};

/// The invariant diagonal tensor sum_X pi_X X⊗...⊗X.  Rejects pi that is not
/// constant on the G-orbits of the state set (tolerance 1e-12).
Tensor no_evolution_tensor(const ModelSpec& model, const NoEvolutionPoint& pt, int n);

/// Contraction of one leaf slot with the all-ones covector; remaining leaves
/// are repacked in order.
Tensor marginalize(const Tensor& p, int leaf);

/// Coordinates in the Fourier basis (kappa = 4 only): p = sum q_Y Y1⊗...⊗Yn
/// with unnormalized ±1 basis vectors, so the inverse transform carries a
/// factor 1/4 per slot.
Tensor fourier_coords(const Tensor& p);
Tensor from_fourier(const Tensor& q);

/// max over group generators of the infinity-norm of rho(g)p - p, compared
/// against tol.
bool is_invariant(const Tensor& p, const ModelSpec& model, double tol);

/// rho(g) applied to the tensor.
Tensor group_action(const Permutation& g, const Tensor& p);

/// (1/|G|) sum_g rho(g) p.
Tensor group_average(const ModelSpec& model, const Tensor& p);

/// Reorders tensor slots: new slot i holds what was at slot slot_of_new[i]
/// (slots are 1-based leaf positions).
Tensor permute_slots(const Tensor& p, const std::vector<int>& slot_of_new);

/// Kronecker product in slot order (a's slots first).
Tensor outer(const Tensor& a, const Tensor& b);

/// Hermitian inner product <a,b> = sum conj(a_i) b_i.
Complex dot(const Tensor& a, const Tensor& b);

/// Rank-one tensor v1 ⊗ ... ⊗ vn from per-slot vectors.
Tensor rank_one(const std::vector<Vector>& slots);

/// One of the four unnormalized Fourier vectors (0=A,1=C,2=G,3=T bar).
Vector fourier_vector(int which);

/// Fourier product tensor Y1⊗...⊗Yn for a word over {0,1,2,3}.
Tensor fourier_product(const std::vector<int>& word);

}  // namespace phyloci
