#include "phyloci/tensor.hpp"

#include <cmath>

namespace phyloci {

Tensor Tensor::zeros(int kappa, int n) {
  const long size = static_cast<long>(std::llround(std::pow(kappa, n)));
  if (size > kMaxTensorSize) throw std::invalid_argument("tensor too large for dense storage");
  Tensor t;
  t.kappa = kappa;
  t.n = n;
  t.data = Vector::Zero(size);
  return t;
}

long Tensor::index_of(const std::vector<int>& states) const {
  if (static_cast<int>(states.size()) != n) throw std::invalid_argument("state word length mismatch");
  long idx = 0;
  for (int x : states) idx = idx * kappa + x;
  return idx;
}

Tensor no_evolution_tensor(const ModelSpec& model, const NoEvolutionPoint& pt, int n) {
  const int kappa = model.kappa();
  if (pt.pi.size() != kappa) throw std::invalid_argument("pi length mismatch");
  for (const auto& orbit : state_orbits(model.group)) {
    for (int x : orbit) {
      if (std::abs(pt.pi(x) - pt.pi(orbit.front())) > 1e-12)
        throw std::runtime_error("pi is not G-invariant (differs on an orbit)");
    }
  }
  Tensor t = Tensor::zeros(kappa, n);
  for (int x = 0; x < kappa; ++x) {
    long idx = 0;
    for (int i = 0; i < n; ++i) idx = idx * kappa + x;
    t.data(idx) = pt.pi(x);
  }
  return t;
}

Tensor marginalize(const Tensor& p, int leaf) {
  if (p.n < 2) throw std::invalid_argument("cannot marginalize an order-1 tensor");
  if (leaf < 1 || leaf > p.n) throw std::invalid_argument("leaf index out of range");
  Tensor out = Tensor::zeros(p.kappa, p.n - 1);
  const long hi = ipow(p.kappa, leaf - 1);          // strides above the slot
  const long lo = ipow(p.kappa, p.n - leaf);        // strides below the slot
  for (long h = 0; h < hi; ++h) {
    for (long l = 0; l < lo; ++l) {
      Complex acc = 0;
      for (int x = 0; x < p.kappa; ++x) acc += p.data((h * p.kappa + x) * lo + l);
      out.data(h * lo + l) = acc;
    }
  }
  return out;
}

Vector fourier_vector(int which) {
  Vector v(4);
  switch (which) {
    case 0: v << 1, 1, 1, 1; break;
    case 1: v << 1, 1, -1, -1; break;
    case 2: v << 1, -1, 1, -1; break;
    case 3: v << 1, -1, -1, 1; break;
    default: throw std::invalid_argument("fourier_vector index");
  }
  return v;
}

namespace {

// Applies a 4x4 matrix to every slot of the tensor.
Tensor apply_per_slot(const Tensor& p, const Matrix& m) {
  Tensor cur = p;
  for (int slot = 0; slot < p.n; ++slot) {
    Tensor next = Tensor::zeros(p.kappa, p.n);
    const long hi = ipow(p.kappa, slot);
    const long lo = ipow(p.kappa, p.n - slot - 1);
    for (long h = 0; h < hi; ++h)
      for (int y = 0; y < p.kappa; ++y)
        for (long l = 0; l < lo; ++l) {
          Complex acc = 0;
          for (int x = 0; x < p.kappa; ++x) acc += m(y, x) * cur.data((h * p.kappa + x) * lo + l);
          next.data((h * p.kappa + y) * lo + l) = acc;
        }
    cur = std::move(next);
  }
  return cur;
}

Matrix fourier_mat() {
  Matrix f(4, 4);
  for (int j = 0; j < 4; ++j) f.col(j) = fourier_vector(j);
  return f;
}

}  // namespace

Tensor fourier_coords(const Tensor& p) {
  if (p.kappa != 4) throw std::runtime_error("Fourier coordinates are only supported for kappa=4");
  return apply_per_slot(p, fourier_mat() / 4.0);  // F^{-1} = F/4 (F symmetric)
}

Tensor from_fourier(const Tensor& q) {
  if (q.kappa != 4) throw std::runtime_error("Fourier coordinates are only supported for kappa=4");
  return apply_per_slot(q, fourier_mat());
}

Tensor group_action(const Permutation& g, const Tensor& p) {
  const auto perm = tensor_index_permutation(g, p.n);
  Tensor out = Tensor::zeros(p.kappa, p.n);
  for (long i = 0; i < p.size(); ++i) out.data(perm[i]) = p.data(i);
  return out;
}

Tensor group_average(const ModelSpec& model, const Tensor& p) {
  Tensor acc = Tensor::zeros(p.kappa, p.n);
  for (const auto& g : model.group.elements) acc.data += group_action(g, p).data;
  acc.data /= static_cast<double>(model.group.order());
  return acc;
}

bool is_invariant(const Tensor& p, const ModelSpec& model, double tol) {
  std::vector<Permutation> gens = model.group.generators;
  if (gens.empty()) return true;
  for (const auto& g : gens) {
    const Tensor moved = group_action(g, p);
    if ((moved.data - p.data).lpNorm<Eigen::Infinity>() > tol) return false;
  }
  return true;
}

Tensor permute_slots(const Tensor& p, const std::vector<int>& slot_of_new) {
  if (static_cast<int>(slot_of_new.size()) != p.n) throw std::invalid_argument("slot permutation size");
  Tensor out = Tensor::zeros(p.kappa, p.n);
  std::vector<int> digits(p.n), src(p.n);
  for (long i = 0; i < out.size(); ++i) {
    long rest = i;
    for (int pos = p.n - 1; pos >= 0; --pos) {
      digits[pos] = static_cast<int>(rest % p.kappa);
      rest /= p.kappa;
    }
    long j = 0;
    for (int pos = 0; pos < p.n; ++pos) src[slot_of_new[pos] - 1] = digits[pos];
    for (int pos = 0; pos < p.n; ++pos) j = j * p.kappa + src[pos];
    out.data(i) = p.data(j);
  }
  return out;
}

Tensor outer(const Tensor& a, const Tensor& b) {
  if (a.kappa != b.kappa) throw std::invalid_argument("kappa mismatch");
  Tensor out = Tensor::zeros(a.kappa, a.n + b.n);
  for (long i = 0; i < a.size(); ++i)
    for (long j = 0; j < b.size(); ++j) out.data(i * b.size() + j) = a.data(i) * b.data(j);
  return out;
}

Complex dot(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) throw std::invalid_argument("size mismatch");
  return a.data.dot(b.data);
}

Tensor rank_one(const std::vector<Vector>& slots) {
  if (slots.empty()) throw std::invalid_argument("rank_one needs at least one slot");
  Tensor t;
  t.kappa = static_cast<int>(slots[0].size());
  t.n = 1;
  t.data = slots[0];
  for (size_t i = 1; i < slots.size(); ++i) {
    Tensor s;
    s.kappa = t.kappa;
    s.n = 1;
    s.data = slots[i];
    t = outer(t, s);
  }
  return t;
}

Tensor fourier_product(const std::vector<int>& word) {
  std::vector<Vector> slots;
  for (int w : word) slots.push_back(fourier_vector(w));
  return rank_one(slots);
}

}  // namespace phyloci
