#include "phyloci/model_param.hpp"

#include <cmath>

namespace phyloci {

namespace {

void dfs_edges(const Tree& tree, int v, int parent, std::vector<std::pair<int, int>>& out) {
  for (int nb : tree.adj[v]) {
    if (nb == parent) continue;
    out.push_back({v, nb});
    dfs_edges(tree, nb, v, out);
  }
}

}  // namespace

std::vector<std::pair<int, int>> canonical_edges(const Tree& tree) {
  std::vector<std::pair<int, int>> out;
  dfs_edges(tree, tree.default_root(), -1, out);
  return out;
}

Vector Parameters::pi(const ModelSpec& model) const {
  const auto orbits = state_orbits(model.group);
  Vector out = Vector::Zero(model.kappa());
  for (size_t o = 0; o < orbits.size(); ++o)
    for (int x : orbits[o]) out(x) = pi_coeffs(static_cast<int>(o));
  return out;
}

Matrix Parameters::edge_matrix(const ModelSpec& model, int e) const {
  const auto basis = equivariant_hom_basis(model);
  Matrix out = Matrix::Zero(model.kappa(), model.kappa());
  for (size_t o = 0; o < basis.size(); ++o) out += edge_coeffs[e](static_cast<int>(o)) * basis[o];
  return out;
}

Parameters random_parameters(const ModelSpec& model, const Tree& tree, std::uint64_t seed,
                             const SampleOptions& options) {
  const auto orbits = state_orbits(model.group);
  const auto hom = equivariant_hom_basis(model);
  const auto edges = canonical_edges(tree);
  const int kappa = model.kappa();
  Rng rng(seed);

  // identity matrix on the hom basis: coefficient 1 on diagonal orbits
  Vector id_coeffs = Vector::Zero(static_cast<int>(hom.size()));
  for (size_t o = 0; o < hom.size(); ++o)
    if (hom[o](0, 0) != 0.0 || hom[o].diagonal().sum() > 0.5) {
      // orbit touching the diagonal is a diagonal orbit (orbits are disjoint)
      bool diag = false;
      for (int i = 0; i < kappa; ++i)
        if (hom[o](i, i) != 0.0) diag = true;
      if (diag) id_coeffs(static_cast<int>(o)) = 1.0;
    }

  auto draw_complex = [&]() -> Complex {
    const double re = rng.uniform(-1.0, 1.0);
    return options.complex_entries ? Complex(re, rng.uniform(-1.0, 1.0)) : Complex(re, 0.0);
  };

  const bool identity_only = options.near_identity && *options.near_identity == 0.0;

  for (int attempt = 0; attempt < 100; ++attempt) {
    Parameters p;
    p.stochastic = options.stochastic;
    p.pi_coeffs.resize(static_cast<int>(orbits.size()));
    for (int o = 0; o < p.pi_coeffs.size(); ++o) p.pi_coeffs(o) = draw_complex();
    if (identity_only) p.pi_coeffs.setOnes();

    for (size_t e = 0; e < edges.size(); ++e) {
      Vector c(static_cast<int>(hom.size()));
      for (int o = 0; o < c.size(); ++o) c(o) = draw_complex();
      if (options.near_identity) {
        const double eps = *options.near_identity;
        c = (1.0 - eps) * id_coeffs + eps * c;
      }
      p.edge_coeffs.push_back(c);
    }

    if (options.stochastic) {
      const Vector piv = p.pi(model);
      const Complex total = piv.sum();
      if (std::abs(total) < 1e-9) continue;
      p.pi_coeffs /= total;
      for (size_t e = 0; e < edges.size(); ++e) {
        // rescale rows so that A 1 = 1; row sums are orbit-constant
        Matrix a = p.edge_matrix(model, static_cast<int>(e));
        const Vector rowsum = a.rowwise().sum();
        bool ok = true;
        for (int i = 0; i < kappa; ++i)
          if (std::abs(rowsum(i)) < 1e-9) ok = false;
        if (!ok) {
          p.edge_coeffs.clear();
          break;
        }
        Vector c = p.edge_coeffs[e];
        // dividing each row by its sum: express back on the hom basis
        Matrix scaled = a;
        for (int i = 0; i < kappa; ++i) scaled.row(i) /= rowsum(i);
        // refit coefficients (hom basis has disjoint supports)
        for (size_t o = 0; o < hom.size(); ++o) {
          for (int i = 0; i < kappa; ++i) {
            bool found = false;
            for (int j = 0; j < kappa; ++j)
              if (hom[o](i, j) != 0.0) {
                c(static_cast<int>(o)) = scaled(i, j);
                found = true;
                break;
              }
            if (found) break;
          }
        }
        p.edge_coeffs[e] = c;
      }
      if (p.edge_coeffs.size() != edges.size()) continue;
    }

    if (identity_only) return p;

    // genericity: no zero pi entry; all matrices nonsingular with det != ±1
    bool generic = true;
    const Vector piv = p.pi(model);
    for (int i = 0; i < kappa && generic; ++i)
      if (std::abs(piv(i)) < 1e-6) generic = false;
    for (size_t e = 0; e < edges.size() && generic; ++e) {
      const Complex det = p.edge_matrix(model, static_cast<int>(e)).determinant();
      if (std::abs(det) < 1e-6 || std::abs(std::abs(det) - 1.0) < 1e-6) generic = false;
    }
    if (generic) return p;
  }
  throw std::runtime_error("random_parameters: genericity resampling exceeded 100 attempts");
}

namespace {

struct PsiEvaluator {
  const ModelSpec& model;
  const Tree& tree;
  std::vector<Matrix> edge_mat;  // per canonical edge, directed away from canonical root
  std::vector<std::pair<int, int>> edges;

  Matrix matrix_for(int parent, int child) const {
    for (size_t e = 0; e < edges.size(); ++e) {
      if (edges[e] == std::make_pair(parent, child)) return edge_mat[e];
      if (edges[e] == std::make_pair(child, parent)) return edge_mat[e].transpose();
    }
    throw std::runtime_error("edge not found");
  }

  // returns (leaf labels in discovery order, data over [leaves..., state of v])
  std::pair<std::vector<int>, Vector> down(int v, int parent) const {
    const int kappa = model.kappa();
    if (tree.is_leaf(v)) {
      Vector d = Vector::Zero(kappa * kappa);
      for (int x = 0; x < kappa; ++x) d(x * kappa + x) = 1.0;
      return {{tree.leaf_label[v]}, d};
    }
    std::vector<int> labels;
    Vector acc = Vector::Ones(kappa);
    for (int nb : tree.adj[v]) {
      if (nb == parent) continue;
      auto [sub_labels, sub] = down(nb, v);
      const Matrix a = matrix_for(v, nb);
      // contract child state with A[x_v, x_child]
      const long rows = sub.size() / kappa;
      Vector contracted(rows * kappa);
      for (long r = 0; r < rows; ++r)
        for (int xv = 0; xv < kappa; ++xv) {
          Complex s = 0;
          for (int xc = 0; xc < kappa; ++xc) s += a(xv, xc) * sub(r * kappa + xc);
          contracted(r * kappa + xv) = s;
        }
      // merge with accumulator sharing the trailing x_v index
      const long acc_rows = acc.size() / kappa;
      Vector merged(acc_rows * rows * kappa);
      for (long i = 0; i < acc_rows; ++i)
        for (long r = 0; r < rows; ++r)
          for (int xv = 0; xv < kappa; ++xv)
            merged((i * rows + r) * kappa + xv) =
                acc(i * kappa + xv) * contracted(r * kappa + xv);
      acc = std::move(merged);
      labels.insert(labels.end(), sub_labels.begin(), sub_labels.end());
    }
    return {labels, acc};
  }

  Tensor evaluate(const Vector& pi, int root) const {
    const int kappa = model.kappa();
    auto [labels, d] = down(root, -1);
    const long rows = d.size() / kappa;
    Tensor raw = Tensor::zeros(kappa, static_cast<int>(labels.size()));
    for (long r = 0; r < rows; ++r) {
      Complex s = 0;
      for (int x = 0; x < kappa; ++x) s += pi(x) * d(r * kappa + x);
      raw.data(r) = s;
    }
    // reorder slots to ascending leaf label
    std::vector<int> slot_of_new(labels.size());
    for (size_t pos = 0; pos < labels.size(); ++pos) slot_of_new[labels[pos] - 1] = static_cast<int>(pos) + 1;
    return permute_slots(raw, slot_of_new);
  }
};

}  // namespace

Tensor evaluate_psi_rooted(const ModelSpec& model, const Tree& tree, const Parameters& params,
                           int root_vertex) {
  PsiEvaluator ev{model, tree, {}, canonical_edges(tree)};
  if (params.edge_coeffs.size() != ev.edges.size())
    throw std::invalid_argument("parameter edge count does not match the tree");
  for (size_t e = 0; e < ev.edges.size(); ++e)
    ev.edge_mat.push_back(params.edge_matrix(model, static_cast<int>(e)));
  if (root_vertex == tree.default_root()) return ev.evaluate(params.pi(model), root_vertex);
  // Root moves leave the tensor fixed once the root distribution is the
  // all-ones vector: absorb diag(pi) into the first edge at the default
  // root, then transpose matrices along re-oriented edges.
  ev.edge_mat[0] = Matrix(params.pi(model).asDiagonal()) * ev.edge_mat[0];
  return ev.evaluate(Vector::Ones(model.kappa()), root_vertex);
}

Tensor evaluate_psi(const ModelSpec& model, const Tree& tree, const Parameters& params) {
  return evaluate_psi_rooted(model, tree, params, tree.default_root());
}

Matrix psi_jacobian(const ModelSpec& model, const Tree& tree, const Parameters& params) {
  const auto orbits = state_orbits(model.group);
  const auto hom = equivariant_hom_basis(model);
  const auto edges = canonical_edges(tree);
  const int n_pi = static_cast<int>(orbits.size());
  const int n_hom = static_cast<int>(hom.size());
  const int n_params = n_pi + static_cast<int>(edges.size()) * n_hom;

  const Tensor base = evaluate_psi(model, tree, params);
  Matrix jac(base.size(), n_params);

  // pi columns: Psi is linear in pi
  for (int o = 0; o < n_pi; ++o) {
    Parameters p = params;
    p.pi_coeffs = Vector::Zero(n_pi);
    p.pi_coeffs(o) = 1.0;
    jac.col(o) = evaluate_psi(model, tree, p).data;
  }
  // edge columns: Psi is linear in each edge's coefficients
  for (size_t e = 0; e < edges.size(); ++e) {
    for (int o = 0; o < n_hom; ++o) {
      Parameters p = params;
      p.edge_coeffs[e] = Vector::Zero(n_hom);
      p.edge_coeffs[e](o) = 1.0;
      jac.col(n_pi + static_cast<int>(e) * n_hom + o) = evaluate_psi(model, tree, p).data;
    }
  }
  return jac;
}

Matrix psi_jacobian_fd(const ModelSpec& model, const Tree& tree, const Parameters& params,
                       double h_scale) {
  const auto orbits = state_orbits(model.group);
  const auto hom = equivariant_hom_basis(model);
  const auto edges = canonical_edges(tree);
  const int n_pi = static_cast<int>(orbits.size());
  const int n_hom = static_cast<int>(hom.size());
  const int n_params = n_pi + static_cast<int>(edges.size()) * n_hom;

  const Tensor base = evaluate_psi(model, tree, params);
  Matrix jac(base.size(), n_params);

  auto central = [&](int col, Complex* coeff) {
    const double h = h_scale * (1.0 + std::abs(*coeff));
    const Complex saved = *coeff;
    *coeff = saved + h;
    const Tensor up = evaluate_psi(model, tree, params);
    *coeff = saved - h;
    const Tensor dn = evaluate_psi(model, tree, params);
    *coeff = saved;
    jac.col(col) = (up.data - dn.data) / (2.0 * h);
  };

  Parameters& mutable_params = const_cast<Parameters&>(params);
  int col = 0;
  for (int o = 0; o < n_pi; ++o, ++col) central(col, &mutable_params.pi_coeffs(o));
  for (size_t e = 0; e < edges.size(); ++e)
    for (int o = 0; o < n_hom; ++o, ++col) central(col, &mutable_params.edge_coeffs[e](o));
  return jac;
}

}  // namespace phyloci
