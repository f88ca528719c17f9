#include "phyloci/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cmath>

namespace phyloci {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace

NoEvolutionPoint random_no_evolution(const ModelSpec& model, std::uint64_t seed) {
  Rng rng(seed);
  const auto orbits = state_orbits(model.group);
  NoEvolutionPoint pt;
  pt.pi = Vector::Zero(model.kappa());
  for (const auto& orbit : orbits) {
    const double c = rng.uniform(0.5, 1.5);
    for (int x : orbit) pt.pi(x) = c;
  }
  return pt;
}

int numeric_dimension(const ModelSpec& model, const Tree& tree, int trials, std::uint64_t seed,
                      double tol) {
  int best = 0;
  for (int t = 0; t < trials; ++t) {
    const Parameters params = random_parameters(model, tree, seed + t);
    const Matrix jac = psi_jacobian(model, tree, params);
    best = std::max(best, numeric_rank(jac, tol));
  }
  return best;
}

VerifyReport check_vanishing(const EquationSystem& system, const Tensor& p, double tol) {
  Timer timer;
  const Vector coords = system.coords_of(p);
  double worst = 0.0;
  for (const auto& eq : system.equations) {
    const double v = std::abs(eq.evaluate(coords));
    worst = std::max(worst, v / eq.scale(coords));
  }
  char buf[48];
  VerifyReport r;
  r.check = "vanishing";
  std::snprintf(buf, sizeof(buf), "max normalized residual <= %g", tol);
  r.expected = buf;
  std::snprintf(buf, sizeof(buf), "%.6g", worst);
  r.observed = buf;
  r.tol = tol;
  r.pass = worst <= tol;
  r.runtime_ms = timer.ms();
  return r;
}

Vector normalized_gradient_row(const MinorEquation& eq, const Vector& coords, int dim) {
  Vector g = eq.gradient(coords, dim);
  const double scale = eq.gradient_scale(coords);
  // below 1e-9 of the cofactor bound the gradient is cancellation noise
  if (scale <= 0.0 || g.norm() < 1e-9 * scale) return Vector::Zero(dim);
  return g / scale;
}

Matrix system_jacobian(const EquationSystem& system, const Vector& coords) {
  Matrix jac(static_cast<int>(system.equations.size()), system.coord_dim);
  for (size_t i = 0; i < system.equations.size(); ++i)
    jac.row(static_cast<int>(i)) =
        normalized_gradient_row(system.equations[i], coords, system.coord_dim).transpose();
  return jac;
}

int jacobian_rank_at_coords(const EquationSystem& system, const Vector& coords, double tol) {
  return numeric_rank_equilibrated(system_jacobian(system, coords), tol);
}

int jacobian_rank_at(const EquationSystem& system, const Tensor& point, double tol) {
  return jacobian_rank_at_coords(system, system.coords_of(point), tol);
}

VerifyReport claw_hypothesis_check(const ModelSpec& model, int d, int trials, std::uint64_t seed,
                                   double tol) {
  Timer timer;
  const ClawEquationSet& cs = claw_set(model, d);
  const SplitBasis basis = cs.coords == ClawCoordKind::SplitQ
                               ? *cs.claw_basis
                               : build_split_basis(model, d, contiguous_split(d, 1));

  // re-express the claw equations over the split q-coordinates
  Matrix bridge(cs.coord_dim, basis.dimension());
  for (int i = 0; i < basis.dimension(); ++i) bridge.col(i) = cs.coords_of(basis.entries[i]);

  std::vector<MinorEquation> eqs;
  for (const auto& eq : cs.equations) eqs.push_back(eq.composed_with(bridge));

  // columns to keep: everything except (k, i <= m_k, j <= m_k)
  std::vector<int> keep;
  for (const auto& blk : basis.blocks)
    for (int i = 1; i <= blk.rows; ++i)
      for (int j = 1; j <= blk.cols; ++j)
        if (i > blk.mk || j > blk.mk) keep.push_back(basis.index_of(blk.k, i, j));

  std::string newick = "(";
  for (int i = 1; i <= d; ++i) newick += (i > 1 ? "," : "") + std::to_string(i);
  newick += ");";
  const long expected = codimension(model, parse_newick(newick));

  int worst_rank = -1;
  std::vector<std::uint64_t> seeds;
  for (int t = 0; t < trials; ++t) {
    seeds.push_back(seed + t);
    const NoEvolutionPoint pt = random_no_evolution(model, seed + t);
    const Tensor pi_d = no_evolution_tensor(model, pt, d);
    const Vector q = basis.to_q(pi_d);
    Matrix jac(static_cast<int>(eqs.size()), basis.dimension());
    for (size_t i = 0; i < eqs.size(); ++i)
      jac.row(static_cast<int>(i)) = normalized_gradient_row(eqs[i], q, basis.dimension()).transpose();
    Matrix reduced(jac.rows(), static_cast<int>(keep.size()));
    for (size_t c = 0; c < keep.size(); ++c) reduced.col(static_cast<int>(c)) = jac.col(keep[c]);
    const int rank = numeric_rank_equilibrated(reduced, tol);
    if (worst_rank < 0 || rank < worst_rank) worst_rank = rank;
  }

  VerifyReport r;
  r.check = "claw_hypothesis(" + model.name + "," + std::to_string(d) + ")";
  r.expected = "reduced Jacobian rank " + std::to_string(expected);
  r.observed = std::to_string(worst_rank);
  r.tol = tol;
  r.pass = worst_rank == expected;
  r.seeds = seeds;
  r.runtime_ms = timer.ms();
  return r;
}

VerifyReport smoothness_probe(const ModelSpec& model, int claw_d, const NoEvolutionPoint& pt,
                              double tol) {
  Timer timer;
  std::string newick = "(";
  for (int i = 1; i <= claw_d; ++i) newick += (i > 1 ? "," : "") + std::to_string(i);
  newick += ");";
  const Tree claw = parse_newick(newick);

  const auto orbits = state_orbits(model.group);
  Parameters params;
  params.pi_coeffs.resize(static_cast<int>(orbits.size()));
  for (size_t o = 0; o < orbits.size(); ++o)
    params.pi_coeffs(static_cast<int>(o)) = pt.pi(orbits[o].front());
  const auto hom = equivariant_hom_basis(model);
  Vector id_coeffs = Vector::Zero(static_cast<int>(hom.size()));
  for (size_t o = 0; o < hom.size(); ++o) {
    bool diag = false;
    for (int i = 0; i < model.kappa(); ++i)
      if (hom[o](i, i) != 0.0) diag = true;
    if (diag) id_coeffs(static_cast<int>(o)) = 1.0;
  }
  for (size_t e = 0; e < canonical_edges(claw).size(); ++e) params.edge_coeffs.push_back(id_coeffs);

  const int rank = numeric_rank(psi_jacobian(model, claw, params), tol);
  const long expected = cone_dimension(model, claw);

  VerifyReport r;
  r.check = "smoothness_probe(" + model.name + ",claw" + std::to_string(claw_d) + ")";
  r.expected = "Psi Jacobian rank " + std::to_string(expected);
  r.observed = std::to_string(rank);
  r.tol = tol;
  r.pass = rank == expected;
  r.runtime_ms = timer.ms();
  return r;
}

Matrix gmm_mixed_basis_bridge() {
  // standard coordinate a_{xYZ} = sum_xbar F(x, xbar) c_{xbar Y Z}
  Matrix f(4, 4);
  for (int j = 0; j < 4; ++j) f.col(j) = fourier_vector(j);
  Matrix bridge = Matrix::Zero(64, 64);
  for (int x = 0; x < 4; ++x)
    for (int xb = 0; xb < 4; ++xb)
      for (int yz = 0; yz < 16; ++yz) bridge(x * 16 + yz, xb * 16 + yz) = f(x, xb);
  return bridge;
}

VerifyReport gmm_maxrank_check(int trials, std::uint64_t seed, double tol) {
  Timer timer;
  const ModelSpec gmm = builtin_model("GMM");
  const ClawEquationSet& cs = claw_set(gmm, 3);
  const Matrix bridge = gmm_mixed_basis_bridge();

  std::vector<MinorEquation> eqs;
  for (const auto& eq : cs.equations) eqs.push_back(eq.composed_with(bridge));

  std::vector<int> keep;  // drop mixed coordinates with xbar = A-bar (first block)
  for (int c = 16; c < 64; ++c) keep.push_back(c);

  int worst_rank = -1;
  std::vector<std::uint64_t> seeds;
  for (int t = 0; t < trials; ++t) {
    seeds.push_back(seed + t);
    const NoEvolutionPoint pt = random_no_evolution(gmm, seed + t);
    const Tensor pi3 = no_evolution_tensor(gmm, pt, 3);
    // mixed coordinates of the point: inverse of the bridge relation
    const Tensor four_slot1 = [&] {
      // apply F^{-1} on slot 1 only
      Tensor out = Tensor::zeros(4, 3);
      Matrix f(4, 4);
      for (int j = 0; j < 4; ++j) f.col(j) = fourier_vector(j);
      const Matrix finv = f / 4.0;
      for (int xb = 0; xb < 4; ++xb)
        for (int yz = 0; yz < 16; ++yz) {
          Complex acc = 0;
          for (int x = 0; x < 4; ++x) acc += finv(xb, x) * pi3.data(x * 16 + yz);
          out.data(xb * 16 + yz) = acc;
        }
      return out;
    }();
    const Vector mixed = four_slot1.data;
    Matrix jac(static_cast<int>(eqs.size()), 64);
    for (size_t i = 0; i < eqs.size(); ++i)
      jac.row(static_cast<int>(i)) = normalized_gradient_row(eqs[i], mixed, 64).transpose();
    Matrix reduced(jac.rows(), static_cast<int>(keep.size()));
    for (size_t c = 0; c < keep.size(); ++c) reduced.col(static_cast<int>(c)) = jac.col(keep[c]);
    const int rank = numeric_rank_equilibrated(reduced, tol);
    if (worst_rank < 0 || rank < worst_rank) worst_rank = rank;
  }

  VerifyReport r;
  r.check = "gmm_maxrank";
  r.expected = "rank 24";
  r.observed = std::to_string(worst_rank);
  r.tol = tol;
  r.pass = worst_rank == 24;
  r.seeds = seeds;
  r.runtime_ms = timer.ms();
  return r;
}

}  // namespace phyloci
