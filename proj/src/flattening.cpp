#include "phyloci/flattening.hpp"

#include <cmath>

namespace phyloci {

Matrix MinorEquation::instantiate(const Vector& coords) const {
  Matrix m(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) m(r, c) = entries[r][c].eval(coords);
  return m;
}

Complex MinorEquation::evaluate(const Vector& coords) const {
  if (size == 1) return entries[0][0].eval(coords);
  return instantiate(coords).determinant();
}

namespace {

Complex cofactor(const Matrix& m, int r, int c) {
  const int size = static_cast<int>(m.rows());
  if (size == 1) return 1.0;
  Matrix sub(size - 1, size - 1);
  for (int i = 0, si = 0; i < size; ++i) {
    if (i == r) continue;
    for (int j = 0, sj = 0; j < size; ++j) {
      if (j == c) continue;
      sub(si, sj) = m(i, j);
      ++sj;
    }
    ++si;
  }
  return (((r + c) % 2) ? -1.0 : 1.0) * sub.determinant();
}

}  // namespace

Vector MinorEquation::gradient(const Vector& coords, int coord_dim) const {
  const Matrix m = instantiate(coords);
  Vector grad = Vector::Zero(coord_dim);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      if (entries[r][c].terms.empty()) continue;
      const Complex cof = cofactor(m, r, c);
      for (const auto& [idx, coeff] : entries[r][c].terms) grad(idx) += cof * coeff;
    }
  }
  return grad;
}

double MinorEquation::gradient_scale(const Vector& coords) const {
  const Matrix m = instantiate(coords);
  double scale = 0.0;
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      if (entries[r][c].terms.empty()) continue;
      const double cof = std::abs(cofactor(m, r, c));
      for (const auto& [idx, coeff] : entries[r][c].terms) {
        (void)idx;
        scale += cof * std::abs(coeff);
      }
    }
  }
  return scale;
}

double MinorEquation::scale(const Vector& coords) const {
  const double fro = instantiate(coords).norm();
  return std::max(1.0, std::pow(fro, size));
}

MinorEquation MinorEquation::composed_with(const Matrix& bridge) const {
  MinorEquation out = *this;
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      const LinearForm& f = entries[r][c];
      LinearForm g;
      g.constant = f.constant;
      Vector combo = Vector::Zero(bridge.cols());
      for (const auto& [idx, coeff] : f.terms) combo += coeff * bridge.row(idx).transpose();
      const double top = combo.cwiseAbs().maxCoeff();
      for (int i = 0; i < combo.size(); ++i)
        if (std::abs(combo(i)) > 1e-12 * std::max(1.0, top)) g.terms.push_back({i, combo(i)});
      out.entries[r][c] = std::move(g);
    }
  }
  return out;
}

ThinFlattening thin_flatten(const Tensor& p, const SplitBasis& basis) {
  const Vector q = basis.to_q(p);
  ThinFlattening out;
  for (const auto& blk : basis.blocks) {
    ThinFlattening::BlockMatrix bm;
    bm.k = blk.k;
    bm.mk = blk.mk;
    bm.m.resize(blk.rows, blk.cols);
    for (int i = 0; i < blk.rows; ++i)
      for (int j = 0; j < blk.cols; ++j) bm.m(i, j) = q(blk.offset + i * blk.cols + j);
    out.blocks.push_back(std::move(bm));
  }
  return out;
}

std::vector<MinorEquation> edge_invariant_set(const SplitBasis& basis) {
  std::vector<MinorEquation> out;
  for (const auto& blk : basis.blocks) {
    const int mk = blk.mk;
    for (int i = mk + 1; i <= blk.rows; ++i) {
      for (int j = mk + 1; j <= blk.cols; ++j) {
        MinorEquation eq;
        eq.id = "edge:k" + std::to_string(blk.k + 1) + ":i" + std::to_string(i) + ":j" +
                std::to_string(j);
        eq.provenance = "edge";
        eq.matrix_ref = "thinflat:" + std::to_string(blk.k + 1);
        for (int r = 1; r <= mk; ++r) eq.rows.push_back(r);
        eq.rows.push_back(i);
        for (int c = 1; c <= mk; ++c) eq.cols.push_back(c);
        eq.cols.push_back(j);
        eq.size = mk + 1;
        eq.entries.assign(eq.size, std::vector<LinearForm>(eq.size));
        for (int r = 0; r < eq.size; ++r)
          for (int c = 0; c < eq.size; ++c)
            eq.entries[r][c] =
                LinearForm::coordinate(basis.index_of(blk.k, eq.rows[r], eq.cols[c]));
        out.push_back(std::move(eq));
      }
    }
  }
  return out;
}

long edge_invariant_count(const ModelSpec& model, int a, int b) {
  const IntVector ma = multiplicities(model, a);
  const IntVector mb = multiplicities(model, b);
  const IntVector mw = multiplicities(model, 1);
  long total = 0;
  for (int k = 0; k < model.group.num_irreps(); ++k) {
    const int kd = model.group.dual_index[k];
    total += static_cast<long>(ma(kd) - mw(kd)) * (mb(k) - mw(k));
  }
  return total;
}

FlatteningRankReport flattening_ranks(const Tensor& p, const SplitBasis& basis, double tol) {
  const ThinFlattening tf = thin_flatten(p, basis);
  FlatteningRankReport report;
  report.split_compatible = true;
  // the tolerance is relative to the top singular value across all blocks;
  // a per-block reference would count a lone noise-level block as rank 1
  double sigma_top = 0.0;
  std::vector<RealVector> svs;
  for (const auto& blk : tf.blocks) {
    Eigen::JacobiSVD<Matrix> svd(blk.m);
    svs.push_back(svd.singularValues());
    if (svs.back().size() > 0) sigma_top = std::max(sigma_top, svs.back()(0));
  }
  for (size_t b = 0; b < tf.blocks.size(); ++b) {
    FlatteningRankReport::PerIrrep pi;
    pi.k = tf.blocks[b].k;
    pi.mk = tf.blocks[b].mk;
    pi.singular_values = svs[b];
    pi.rank = 0;
    for (int i = 0; i < pi.singular_values.size(); ++i)
      if (pi.singular_values(i) > tol * sigma_top) ++pi.rank;
    if (pi.rank > pi.mk) report.split_compatible = false;
    report.per_irrep.push_back(std::move(pi));
  }
  return report;
}

}  // namespace phyloci
