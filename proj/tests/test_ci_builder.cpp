#include "test_util.hpp"

using namespace phyloci;
using namespace phyloci::testutil;

TEST_CASE("codimension arithmetic") {
  const Tree quartet = parse_newick("((1,2),(3,4));");
  CHECK(ambient_dimension(model("JC"), quartet) == 15);
  CHECK(cone_dimension(model("JC"), quartet) == 6);
  CHECK(codimension(model("JC"), quartet) == 9);
  CHECK(cone_dimension(model("GMM"), quartet) == 64);  // dim V = 24n-33 = 63
  CHECK(codimension(model("SS"), parse_newick("(1,2,3);")) == 12);
  CHECK(codimension(model("GMM"), parse_newick("(1,2,3);")) == 24);
}

TEST_CASE("build_ci: JC quartet structure") {
  const Tree quartet = parse_newick("((1,2),(3,4));");
  const EquationSystem sys = build_ci(model("JC"), quartet);
  CHECK(sys.equations.size() == 9);
  CHECK(sys.count("clawA") == 1);
  CHECK(sys.count("clawB") == 1);
  CHECK(sys.count("edge") == 7);
  REQUIRE(sys.counts.size() == 2);
  CHECK(sys.counts[0].n_leaves == 4);
  CHECK(sys.counts[0].claw_b == 1);
  CHECK(sys.counts[0].edge == 7);
  CHECK(sys.counts[1].claw_a == 1);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Parameters p = random_parameters(model("JC"), quartet, seed);
    CHECK(check_vanishing(sys, evaluate_psi(model("JC"), quartet, p), 1e-8).pass);
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Tensor pi4 = no_evolution_tensor(model("JC"), random_no_evolution(model("JC"), seed), 4);
    CHECK(jacobian_rank_at(sys, pi4) == 9);
  }
}

TEST_CASE("build_ci: extended cherry equation keeps the cubic's monomials") {
  // the clawB equation is the tripod cubic with coordinates remapped to the
  // parent embedded block, each scaled by <1,1> = 4 from the padding
  const Tree quartet = parse_newick("((1,2),(3,4));");
  const EquationSystem sys = build_ci(model("JC"), quartet);
  const MinorEquation* claw_b = nullptr;
  for (const auto& eq : sys.equations)
    if (eq.provenance == "clawB") claw_b = &eq;
  REQUIRE(claw_b != nullptr);
  const SplitBasis& basis = *sys.basis;
  Rng rng(5);
  Vector q = Vector::Zero(15);
  for (int i = 0; i < 15; ++i) q(i) = rng.uniform(-1, 1);
  const Complex q1_11 = q(basis.index_of(0, 1, 1)), q1_12 = q(basis.index_of(0, 1, 2));
  const Complex q4_11 = q(basis.index_of(3, 1, 1)), q4_12 = q(basis.index_of(3, 1, 2)),
                q4_13 = q(basis.index_of(3, 1, 3));
  const Complex cubic = q4_11 * q4_12 * q1_12 - q1_11 * q4_13 * q4_13;
  CHECK(std::abs(claw_b->evaluate(q) - 64.0 * cubic) < 1e-10);  // 4^3 overall

  // the clawA equation vanishes on the variety but involves only the
  // A-side-supported coordinates (j <= m_k)
  const MinorEquation* claw_a = nullptr;
  for (const auto& eq : sys.equations)
    if (eq.provenance == "clawA") claw_a = &eq;
  REQUIRE(claw_a != nullptr);
  for (int r = 0; r < claw_a->size; ++r)
    for (int c = 0; c < claw_a->size; ++c)
      for (const auto& [idx, coeff] : claw_a->entries[r][c].terms) {
        (void)coeff;
        int k, i, j;
        basis.coords_of_index(idx, k, i, j);
        CHECK(j <= basis.block(k).mk);
      }
}

TEST_CASE("build_ci: SS and GMM quartets") {
  const Tree quartet = parse_newick("((1,2),(3,4));");
  const EquationSystem ss = build_ci(model("SS"), quartet);
  CHECK(ss.equations.size() == 96);
  CHECK(ss.count("clawA") == 12);
  CHECK(ss.count("clawB") == 12);
  CHECK(ss.count("edge") == 72);

  const EquationSystem gmm = build_ci(model("GMM"), quartet);
  CHECK(gmm.equations.size() == 192);
  CHECK(gmm.count("clawA") == 24);
  CHECK(gmm.count("clawB") == 24);
  CHECK(gmm.count("edge") == 144);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Parameters p = random_parameters(model("GMM"), quartet, seed);
    CHECK(check_vanishing(gmm, evaluate_psi(model("GMM"), quartet, p), 1e-8).pass);
  }
}

TEST_CASE("build_ci: five-leaf caterpillar recursion") {
  const Tree five = parse_newick("((1,2),3,(4,5));");
  const EquationSystem sys = build_ci(model("JC"), five);
  CHECK(codimension(model("JC"), five) == 43);
  CHECK(sys.equations.size() == 43);
  REQUIRE(sys.counts.size() == 3);
  CHECK(sys.counts[0].n_leaves == 5);
  CHECK(sys.counts[0].claw_b == 1);
  CHECK(sys.counts[0].edge == 33);
  CHECK(sys.counts[1].n_leaves == 4);
  CHECK(sys.counts[1].claw_b == 1);
  CHECK(sys.counts[1].edge == 7);
  CHECK(sys.counts[2].claw_a == 1);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Parameters p = random_parameters(model("JC"), five, seed);
    CHECK(check_vanishing(sys, evaluate_psi(model("JC"), five, p), 1e-8).pass);
  }
  const Tensor pi5 = no_evolution_tensor(model("JC"), random_no_evolution(model("JC"), 2), 5);
  CHECK(jacobian_rank_at(sys, pi5) == 43);
}

TEST_CASE("build_ci: Jacobian block structure at a no-evolution point") {
  const Tree quartet = parse_newick("((1,2),(3,4));");
  const EquationSystem sys = build_ci(model("JC"), quartet);
  const SplitBasis& basis = *sys.basis;
  const Tensor pi4 = no_evolution_tensor(model("JC"), random_no_evolution(model("JC"), 9), 4);
  const Vector q = sys.coords_of(pi4);
  const ThinFlattening tf = thin_flatten(pi4, basis);

  for (size_t e = 0; e < sys.equations.size(); ++e) {
    const auto& eq = sys.equations[e];
    const Vector grad = eq.gradient(q, sys.coord_dim);
    const double scale = eq.gradient_scale(q);
    for (int idx = 0; idx < sys.coord_dim; ++idx) {
      int k, i, j;
      basis.coords_of_index(idx, k, i, j);
      const int mk = basis.block(k).mk;
      if (eq.provenance == "clawA" && j > mk) CHECK(std::abs(grad(idx)) <= 1e-9 * scale);
      if (eq.provenance == "clawB" && i > mk) CHECK(std::abs(grad(idx)) <= 1e-9 * scale);
      if (eq.provenance == "edge" && i > mk && j > mk) {
        // Diag(Delta_k) on the trailing block
        Complex delta_k = Complex(1, 0);
        for (const auto& bm : tf.blocks)
          if (bm.k == k && bm.mk > 0) delta_k = bm.m.topLeftCorner(bm.mk, bm.mk).determinant();
        const bool own = eq.rows.back() == i && eq.cols.back() == j &&
                         eq.matrix_ref == "thinflat:" + std::to_string(k + 1);
        const Complex expect = own ? delta_k : Complex(0, 0);
        CHECK(std::abs(grad(idx) - expect) <= 1e-9 * std::max(1.0, scale));
      }
    }
  }
}

TEST_CASE("build_ci: codimension additivity at every level") {
  auto check = [](const char* name, const char* nw) {
    const Tree t = parse_newick(nw);
    const EquationSystem sys = build_ci(model(name), t);
    CHECK(static_cast<long>(sys.equations.size()) == codimension(model(name), t));
    long total = 0;
    for (const auto& lc : sys.counts) total += lc.claw_a + lc.claw_b + lc.edge;
    CHECK(total == codimension(model(name), t));
  };
  check("JC", "((1,2),(3,4));");
  check("JC", "((1,2),3,(4,5));");
  check("JC", "((1,2),(3,4),(5,6));");
  check("SS", "((1,2),(3,4));");
  check("SS", "((1,2),3,(4,5));");
  check("GMM", "((1,2),(3,4));");
}

TEST_CASE("build_ci: missing claw degrees are reported") {
  CHECK_THROWS_WITH_AS(build_ci(model("JC"), parse_newick("((1,2),3,4,5);")),
                       doctest::Contains("(JC, 4)"), std::runtime_error);
  CHECK_THROWS_WITH_AS(build_ci(model("K3"), parse_newick("(1,2,3);")),
                       doctest::Contains("(K3, 3)"), std::runtime_error);
}

TEST_CASE("build_ci: non-trailing cherries are normalized by the leaf order") {
  const Tree t = parse_newick("((1,4),(2,3));");
  const EquationSystem sys = build_ci(model("JC"), t);
  CHECK(sys.equations.size() == 9);
  // the reordering maps (2,3) first, (1,4) last
  CHECK(sys.slot_of_new == std::vector<int>{2, 3, 1, 4});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Parameters p = random_parameters(model("JC"), t, seed);
    CHECK(check_vanishing(sys, evaluate_psi(model("JC"), t, p), 1e-8).pass);
  }
  // tensors from the other quartet topology do not satisfy the system
  const Tree other = parse_newick("((1,2),(3,4));");
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Parameters p = random_parameters(model("JC"), other, seed);
    const VerifyReport r = check_vanishing(sys, evaluate_psi(model("JC"), other, p), 1e-8);
    if (!r.pass) ++rejected;
  }
  CHECK(rejected == 10);
}
