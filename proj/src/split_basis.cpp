#include "phyloci/split_basis.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>

namespace phyloci {

namespace {

Tensor ones_tensor(int kappa, int n) {
  Tensor t = Tensor::zeros(kappa, n);
  t.data.setOnes();
  return t;
}

// (n_k/|G|) sum_g conj(rho_k(g)_{00}) rho_s(g), applied to a tensor.  Its
// image is the F_k slice: the images of v_k = e_1 under equivariant maps.
struct SliceProjector {
  std::vector<std::pair<Complex, std::vector<int>>> terms;  // coeff, index perm
  long size = 0;

  SliceProjector(const ModelSpec& model, int k, int s) {
    const auto& rho = irrep_realization(model, k);
    const auto& g = model.group;
    const double scale = static_cast<double>(g.irrep_dims[k]) / g.order();
    size = ipow(g.kappa, s);
    for (int e = 0; e < g.order(); ++e) {
      const Complex c = std::conj(rho[e](0, 0)) * scale;
      if (std::abs(c) < 1e-14) continue;
      terms.push_back({c, tensor_index_permutation(g.elements[e], s)});
    }
  }

  Tensor apply(const Tensor& t) const {
    Tensor out = Tensor::zeros(t.kappa, t.n);
    for (const auto& [c, perm] : terms)
      for (long i = 0; i < t.size(); ++i) out.data(perm[i]) += c * t.data(i);
    return out;
  }
};

// Candidate generators for the slice: Fourier products for kappa=4 (the
// built-in models), standard basis tensors otherwise.
Tensor candidate_tensor(int kappa, int s, long index) {
  if (kappa == 4) {
    std::vector<int> word(s);
    long rest = index;
    for (int pos = s - 1; pos >= 0; --pos) {
      word[pos] = static_cast<int>(rest % 4);
      rest /= 4;
    }
    return fourier_product(word);
  }
  Tensor t = Tensor::zeros(kappa, s);
  t.data(index) = 1.0;
  return t;
}

// First coordinate (in the candidate coordinate system) with significant
// magnitude; used to normalize completion vectors.
Complex leading_coefficient(const Tensor& t) {
  const Tensor coords = t.kappa == 4 ? fourier_coords(t) : t;
  const double top = coords.data.cwiseAbs().maxCoeff();
  for (long i = 0; i < coords.size(); ++i)
    if (std::abs(coords.data(i)) > 1e-9 * top) return coords.data(i);
  throw std::runtime_error("zero completion vector");
}

}  // namespace

FSliceBasis f_slice_basis(const ModelSpec& model, bool a_side, int size, int k) {
  const int kappa = model.kappa();
  const int target = multiplicities(model, size)(k);
  FSliceBasis out;
  out.k = k;
  out.a_side = a_side;
  out.size = size;
  if (target == 0) return out;

  std::vector<Tensor> accepted;
  std::vector<Vector> shadow;  // orthonormalized span of accepted

  auto add_to_shadow = [&](const Tensor& t) {
    Vector v = t.data;
    for (const auto& u : shadow) v -= u.dot(v) * u;
    const double nv = v.norm();
    if (nv < 1e-9) return false;
    shadow.push_back(v / nv);
    return true;
  };

  if (size > 1) {
    const FSliceBasis base = f_slice_basis(model, a_side, 1, k);
    const Tensor pad = ones_tensor(kappa, size - 1);
    for (const auto& u : base.vectors) {
      Tensor embedded = a_side ? outer(pad, u) : outer(u, pad);
      if (!add_to_shadow(embedded)) throw std::runtime_error("embedded block is degenerate");
      accepted.push_back(std::move(embedded));
    }
  }
  out.embedded = static_cast<int>(accepted.size());

  const SliceProjector proj(model, k, size);
  const long total = ipow(kappa, size);
  for (long idx = 0; idx < total && static_cast<int>(accepted.size()) < target; ++idx) {
    Tensor cand = proj.apply(candidate_tensor(kappa, size, idx));
    if (cand.data.norm() < 1e-9) continue;
    Vector v = cand.data;
    for (const auto& u : shadow) v -= u.dot(v) * u;
    if (v.norm() < 1e-7 * cand.data.norm()) continue;
    Tensor completed = Tensor::zeros(kappa, size);
    completed.data = v;
    completed.data /= leading_coefficient(completed);
    if (!add_to_shadow(completed)) continue;
    accepted.push_back(std::move(completed));
  }
  if (static_cast<int>(accepted.size()) != target)
    throw std::runtime_error("F-slice basis construction failed to reach the multiplicity");
  out.vectors = std::move(accepted);
  return out;
}

Tensor s_operator(const ModelSpec& model, int k, const Tensor& uA, const Tensor& uB) {
  const auto& g = model.group;
  if (g.irrep_dims[k] == 1) return outer(uA, uB);
  Tensor acc = Tensor::zeros(uA.kappa, uA.n + uB.n);
  for (const auto& elem : g.elements)
    acc.data += outer(group_action(elem, uA), group_action(elem, uB)).data;
  acc.data *= static_cast<double>(g.irrep_dims[k]) / g.order();
  return acc;
}

EdgeSplit contiguous_split(int n, int a) {
  EdgeSplit s;
  for (int i = 1; i <= a; ++i) s.A.push_back(i);
  for (int i = a + 1; i <= n; ++i) s.B.push_back(i);
  s.alpha = s.A.back();
  s.beta = s.B.front();
  return s;
}

const SplitBasis::Block& SplitBasis::block(int k) const {
  for (const auto& blk : blocks)
    if (blk.k == k) return blk;
  throw std::invalid_argument("no block for irrep");
}

bool SplitBasis::has_block(int k) const {
  for (const auto& blk : blocks)
    if (blk.k == k) return true;
  return false;
}

int SplitBasis::index_of(int k, int i, int j) const {
  const Block& blk = block(k);
  if (i < 1 || i > blk.rows || j < 1 || j > blk.cols) throw std::invalid_argument("q index out of range");
  return blk.offset + (i - 1) * blk.cols + (j - 1);
}

void SplitBasis::coords_of_index(int idx, int& k, int& i, int& j) const {
  for (const auto& blk : blocks) {
    if (idx >= blk.offset && idx < blk.offset + blk.rows * blk.cols) {
      k = blk.k;
      i = (idx - blk.offset) / blk.cols + 1;
      j = (idx - blk.offset) % blk.cols + 1;
      return;
    }
  }
  throw std::invalid_argument("entry index out of range");
}

Vector SplitBasis::to_q(const Tensor& p) const {
  if (p.size() != basis_matrix_.rows()) throw std::invalid_argument("tensor size mismatch");
  Vector q = qr_.solve(p.data);
  const double residual = (basis_matrix_ * q - p.data).norm();
  // absolute floor 1e-12 tolerates inputs that are pure roundoff noise
  if (residual > std::max(1e-8 * p.data.norm(), 1e-12)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e (norm %.3e)", residual, p.data.norm());
    throw std::runtime_error(std::string("tensor not in invariant subspace, residual ") + buf);
  }
  return q;
}

Tensor SplitBasis::from_q(const Vector& q) const {
  if (q.size() != dimension()) throw std::invalid_argument("coordinate size mismatch");
  Tensor t = Tensor::zeros(model->kappa(), n);
  t.data = basis_matrix_ * q;
  return t;
}

SplitBasis build_split_basis(const ModelSpec& model, int n, const EdgeSplit& split) {
  const int a = static_cast<int>(split.A.size());
  const int b = static_cast<int>(split.B.size());
  if (a + b != n) throw std::invalid_argument("split does not cover the leaf set");
  if (b < 2 || a < 1) throw std::invalid_argument("split sides too small");
  {
    std::vector<int> all = split.A;
    all.insert(all.end(), split.B.begin(), split.B.end());
    std::sort(all.begin(), all.end());
    for (int i = 0; i < n; ++i)
      if (all[i] != i + 1) throw std::invalid_argument("split is not a bipartition of 1..n");
  }

  SplitBasis sb;
  sb.model = std::make_shared<ModelSpec>(model);
  sb.n = n;
  sb.a = a;
  sb.b = b;
  sb.split = split;

  const auto& group = model.group;
  const IntVector mA = multiplicities(model, a);
  const IntVector mB = multiplicities(model, b);
  const IntVector mW = multiplicities(model, 1);

  // slot permutation from (A...,B...) order to label order
  std::vector<int> combined = split.A;
  combined.insert(combined.end(), split.B.begin(), split.B.end());
  bool contiguous = true;
  for (int i = 0; i < n; ++i)
    if (combined[i] != i + 1) contiguous = false;
  std::vector<int> slot_of_new(n);
  for (int i = 0; i < n; ++i) slot_of_new[combined[i] - 1] = i + 1;

  for (int k = 0; k < group.num_irreps(); ++k) {
    const int kd = group.dual_index[k];
    const int rows = mA(kd);
    const int cols = mB(k);
    if (rows == 0 || cols == 0) continue;
    const FSliceBasis ab = f_slice_basis(model, true, a, kd);
    const FSliceBasis bb = f_slice_basis(model, false, b, k);
    SplitBasis::Block blk;
    blk.k = k;
    blk.rows = rows;
    blk.cols = cols;
    blk.mk = mW(k);
    blk.offset = static_cast<int>(sb.entries.size());
    sb.blocks.push_back(blk);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        Tensor entry = s_operator(model, k, ab.vectors[i], bb.vectors[j]);
        if (!contiguous) entry = permute_slots(entry, slot_of_new);
        sb.entries.push_back(std::move(entry));
      }
    }
  }

  const long expected = m1_of(group, n);
  if (static_cast<long>(sb.entries.size()) != expected)
    throw std::runtime_error("split basis entry count does not match dim of the invariant space");

  sb.basis_matrix_.resize(sb.entries[0].size(), sb.dimension());
  for (int c = 0; c < sb.dimension(); ++c) sb.basis_matrix_.col(c) = sb.entries[c].data;
  sb.qr_.compute(sb.basis_matrix_);
  if (sb.qr_.rank() != sb.dimension())
    throw std::runtime_error("split basis is rank deficient");
  {
    Eigen::JacobiSVD<Matrix> svd(sb.basis_matrix_);
    const auto& sv = svd.singularValues();
    sb.condition_number = sv(0) / sv(sv.size() - 1);
  }
  return sb;
}

Vector to_q_coords(const Tensor& p, const SplitBasis& basis) { return basis.to_q(p); }

Tensor from_q_coords(const Vector& q, const SplitBasis& basis) { return basis.from_q(q); }

}  // namespace phyloci
