#include "test_util.hpp"

using namespace phyloci;
using namespace phyloci::testutil;

TEST_CASE("F-slice bases: bases of F_k(W) match the Fourier conventions") {
  // GMM: the whole Fourier basis
  const FSliceBasis gmm = f_slice_basis(model("GMM"), false, 1, 0);
  REQUIRE(gmm.vectors.size() == 4);
  for (int j = 0; j < 4; ++j) CHECK(tensors_equal(gmm.vectors[j], ft(std::string(1, "ACGT"[j]))));

  // SS: <A,T-bar> and <C,G-bar>
  const FSliceBasis ss1 = f_slice_basis(model("SS"), false, 1, 0);
  REQUIRE(ss1.vectors.size() == 2);
  CHECK(tensors_equal(ss1.vectors[0], ft("A")));
  CHECK(tensors_equal(ss1.vectors[1], ft("T")));
  const FSliceBasis ss2 = f_slice_basis(model("SS"), false, 1, 1);
  REQUIRE(ss2.vectors.size() == 2);
  CHECK(tensors_equal(ss2.vectors[0], ft("C")));
  CHECK(tensors_equal(ss2.vectors[1], ft("G")));

  // JC: <A-bar> and <C-bar>; K2: <A-bar>, <G-bar>, <C-bar>
  CHECK(tensors_equal(f_slice_basis(model("JC"), false, 1, 0).vectors[0], ft("A")));
  CHECK(tensors_equal(f_slice_basis(model("JC"), false, 1, 3).vectors[0], ft("C")));
  CHECK(f_slice_basis(model("JC"), false, 1, 1).vectors.empty());  // m_2 = 0
  CHECK(tensors_equal(f_slice_basis(model("K2"), false, 1, 1).vectors[0], ft("G")));
  CHECK(tensors_equal(f_slice_basis(model("K2"), false, 1, 2).vectors[0], ft("C")));
}

TEST_CASE("F-slice bases: SS A-side of size 2 (embedded first, span as listed)") {
  const FSliceBasis b = f_slice_basis(model("SS"), true, 2, 0);
  REQUIRE(b.vectors.size() == 8);
  CHECK(b.embedded == 2);
  CHECK(tensors_equal(b.vectors[0], ft("AA")));
  CHECK(tensors_equal(b.vectors[1], ft("AT")));
  std::vector<Tensor> listed = {ft("AA"), ft("AT"), ft("TA"), ft("TT"),
                                ft("CC"), ft("CG"), ft("GC"), ft("GG")};
  std::vector<Tensor> mine(b.vectors.begin(), b.vectors.end());
  CHECK(span_distance(mine, listed) == 0.0);

  const FSliceBasis b2 = f_slice_basis(model("SS"), true, 2, 1);
  std::vector<Tensor> listed2 = {ft("AC"), ft("AG"), ft("TC"), ft("TG"),
                                 ft("CA"), ft("CT"), ft("GA"), ft("GT")};
  std::vector<Tensor> mine2(b2.vectors.begin(), b2.vectors.end());
  CHECK(tensors_equal(b2.vectors[0], ft("AC")));
  CHECK(tensors_equal(b2.vectors[1], ft("AG")));
  CHECK(span_distance(mine2, listed2) == 0.0);
}

TEST_CASE("F-slice bases: JC B-side of size 2 reproduces the listed triple") {
  const FSliceBasis b4 = f_slice_basis(model("JC"), false, 2, 3);
  REQUIRE(b4.vectors.size() == 3);
  CHECK(b4.embedded == 1);
  CHECK(tensors_equal(b4.vectors[0], ft("CA")));  // u ⊗ 1 comes first
  CHECK(tensors_equal(b4.vectors[1], ft("AC")));
  CHECK(tensors_equal(b4.vectors[2], sum({ft("GT"), ft("TG")})));

  const FSliceBasis b1 = f_slice_basis(model("JC"), false, 2, 0);
  REQUIRE(b1.vectors.size() == 2);
  CHECK(tensors_equal(b1.vectors[0], ft("AA")));
  CHECK(tensors_equal(b1.vectors[1], sum({ft("CC"), ft("GG"), ft("TT")})));

  CHECK(f_slice_basis(model("JC"), false, 2, 2).vectors.size() == 1);  // m_3(2) = 1
  CHECK(f_slice_basis(model("JC"), false, 2, 4).vectors.size() == 1);  // m_5(2) = 1
}

TEST_CASE("s_operator: exact for 1-dimensional irreps") {
  const Tensor uA = ft("AT"), uB = ft("GA");
  for (int k = 0; k < 2; ++k) {
    const Tensor s = s_operator(model("SS"), k, uA, uB);
    CHECK(tensors_equal(s, outer(uA, uB)));
  }
  // trivial representation of JC: averaging leaves invariant arguments alone
  const Tensor a = ft("AA");
  const Tensor b = sum({ft("CC"), ft("GG"), ft("TT")});
  CHECK(tensors_equal(s_operator(model("JC"), 0, a, b), outer(a, b), 1e-12));
}

TEST_CASE("s_operator: JC chi_4 values from the listing") {
  // S(AC ⊗ CA) = ACCA + AGGA + ATTA
  const Tensor s1 = s_operator(model("JC"), 3, ft("AC"), ft("CA"));
  CHECK(tensors_equal(s1, sum({outer(ft("AC"), ft("CA")), outer(ft("AG"), ft("GA")),
                               outer(ft("AT"), ft("TA"))}),
                      1e-12));
  // S(AC ⊗ AC) = ACAC + AGAG + ATAT
  const Tensor s2 = s_operator(model("JC"), 3, ft("AC"), ft("AC"));
  CHECK(tensors_equal(s2, sum({outer(ft("AC"), ft("AC")), outer(ft("AG"), ft("AG")),
                               outer(ft("AT"), ft("AT"))}),
                      1e-12));
  // S(AC ⊗ (GT+TG)) = AC⊗(GT+TG) + AG⊗(CT+TC) + AT⊗(CG+GC)
  const Tensor s3 = s_operator(model("JC"), 3, ft("AC"), sum({ft("GT"), ft("TG")}));
  CHECK(tensors_equal(
      s3,
      sum({outer(ft("AC"), sum({ft("GT"), ft("TG")})), outer(ft("AG"), sum({ft("CT"), ft("TC")})),
           outer(ft("AT"), sum({ft("CG"), ft("GC")}))}),
      1e-12));
}

TEST_CASE("s_operator output is invariant") {
  for (int k : {0, 2, 3, 4}) {
    const auto a = f_slice_basis(model("JC"), true, 2, k);
    const auto b = f_slice_basis(model("JC"), false, 2, k);
    if (a.vectors.empty()) continue;
    const Tensor s = s_operator(model("JC"), k, a.vectors.back(), b.vectors.back());
    CHECK(is_invariant(s, model("JC"), 1e-10));
  }
}

TEST_CASE("split basis: block shapes") {
  const SplitBasis jc = build_split_basis(model("JC"), 4, contiguous_split(4, 2));
  CHECK(jc.dimension() == 15);
  REQUIRE(jc.blocks.size() == 4);  // k = 1, 3, 4, 5 (no chi_2 block)
  CHECK(jc.blocks[0].k == 0);
  CHECK(jc.blocks[0].rows == 2);
  CHECK(jc.blocks[0].cols == 2);
  CHECK(jc.blocks[1].k == 2);
  CHECK(jc.blocks[1].rows == 1);
  CHECK(jc.blocks[2].k == 3);
  CHECK(jc.blocks[2].rows == 3);
  CHECK(jc.blocks[2].cols == 3);
  CHECK(jc.blocks[3].k == 4);
  CHECK(jc.blocks[3].rows == 1);

  const SplitBasis ss = build_split_basis(model("SS"), 4, contiguous_split(4, 2));
  CHECK(ss.dimension() == 128);
  REQUIRE(ss.blocks.size() == 2);
  for (const auto& blk : ss.blocks) {
    CHECK(blk.rows == 8);
    CHECK(blk.cols == 8);
  }

  const SplitBasis gmm = build_split_basis(model("GMM"), 3, contiguous_split(3, 1));
  CHECK(gmm.dimension() == 64);
  REQUIRE(gmm.blocks.size() == 1);
  CHECK(gmm.blocks[0].rows == 4);
  CHECK(gmm.blocks[0].cols == 16);
  CHECK(gmm.condition_number < 1e6);
}

TEST_CASE("split basis: entries invariant, 1-dim models get pure products") {
  const SplitBasis ss = build_split_basis(model("SS"), 4, contiguous_split(4, 2));
  for (const auto& blk : ss.blocks) {
    const auto a = f_slice_basis(model("SS"), true, 2, blk.k);
    const auto b = f_slice_basis(model("SS"), false, 2, blk.k);
    for (int i = 1; i <= blk.rows; ++i)
      for (int j = 1; j <= blk.cols; ++j)
        CHECK(tensors_equal(ss.entries[ss.index_of(blk.k, i, j)],
                            outer(a.vectors[i - 1], b.vectors[j - 1])));
  }
  const SplitBasis jc = build_split_basis(model("JC"), 4, contiguous_split(4, 2));
  for (const auto& e : jc.entries) CHECK(is_invariant(e, model("JC"), 1e-10));
}

TEST_CASE("split basis: q-coordinate roundtrips") {
  const SplitBasis jc = build_split_basis(model("JC"), 4, contiguous_split(4, 2));
  // basis entries map to indicator coordinates
  const Vector q11 = jc.to_q(jc.entries[0]);
  CHECK(std::abs(q11(0) - Complex(1, 0)) < 1e-10);
  CHECK(q11.tail(14).norm() < 1e-10);

  // roundtrip on a random invariant tensor
  Rng rng(4);
  Tensor r = Tensor::zeros(4, 4);
  for (long i = 0; i < r.size(); ++i) r.data(i) = rng.uniform(-1, 1);
  r = group_average(model("JC"), r);
  const Vector q = jc.to_q(r);
  CHECK((jc.from_q(q).data - r.data).lpNorm<Eigen::Infinity>() < 1e-10);

  // non-invariant input is rejected
  Tensor bad = Tensor::zeros(4, 4);
  bad.data(1) = 1.0;
  CHECK_THROWS_WITH_AS(jc.to_q(bad), doctest::Contains("not in invariant subspace"),
                       std::runtime_error);
}

TEST_CASE("split basis: no-evolution q^1_11 is nonzero for generic pi") {
  const SplitBasis jc = build_split_basis(model("JC"), 4, contiguous_split(4, 2));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Tensor pi4 = no_evolution_tensor(model("JC"), random_no_evolution(model("JC"), seed), 4);
    const Vector q = jc.to_q(pi4);
    CHECK(std::abs(q(jc.index_of(0, 1, 1))) > 1e-6);
  }
}

TEST_CASE("split basis: extension property (padded claw entries are parent entries)") {
  // quartet basis entries with embedded indices coincide with the 1-padded
  // claw basis entries of the cherry subtree
  for (const char* name : {"JC", "SS"}) {
    const ModelSpec& m = model(name);
    const SplitBasis quartet = build_split_basis(m, 4, contiguous_split(4, 2));
    const SplitBasis claw = build_split_basis(m, 3, contiguous_split(3, 1));
    const Tensor pad = ft("A");  // the all-ones vector
    for (const auto& blk : quartet.blocks) {
      if (!claw.has_block(blk.k)) continue;
      const auto& cblk = claw.block(blk.k);
      for (int i = 1; i <= std::min(blk.mk, cblk.rows); ++i) {
        for (int j = 1; j <= blk.cols; ++j) {
          const Tensor padded = outer(pad, claw.entries[claw.index_of(blk.k, i, j)]);
          const Tensor& parent = quartet.entries[quartet.index_of(blk.k, i, j)];
          CHECK(tensors_equal(padded, parent, 1e-10));
        }
      }
    }
  }
}

TEST_CASE("split basis: non-contiguous splits use label slots") {
  const SplitBasis b = build_split_basis(model("SS"), 4, [&] {
    EdgeSplit s;
    s.A = {1, 3};
    s.B = {2, 4};
    s.alpha = 3;
    s.beta = 2;
    return s;
  }());
  CHECK(b.dimension() == 128);
  // first entry is AA ⊗ AA arranged on slots (1,3 | 2,4) = still all-A product
  CHECK(tensors_equal(b.entries[0], ft("AAAA")));
  // entry with u at alpha-slot: A-side (A,T) at slots (1,3): the second A-row
  // vector is A⊗T placed at slots 1,3
  const Tensor e = b.entries[b.index_of(0, 2, 1)];
  CHECK(tensors_equal(e, permute_slots(outer(ft("AT"), ft("AA")), {1, 3, 2, 4})));
}

TEST_CASE("split basis: K2 and K3 quartets (higher-dimensional irrep path)") {
  const SplitBasis k2 = build_split_basis(model("K2"), 4, contiguous_split(4, 2));
  CHECK(k2.dimension() == 36);  // m_1(4) = (256 + 2*16)/8
  for (const auto& e : k2.entries) CHECK(is_invariant(e, model("K2"), 1e-10));

  const SplitBasis k3 = build_split_basis(model("K3"), 4, contiguous_split(4, 2));
  CHECK(k3.dimension() == 64);
  // 1-dimensional irreps: entries are pure products of the slice bases
  for (const auto& blk : k3.blocks) {
    const auto a = f_slice_basis(model("K3"), true, 2, model("K3").group.dual_index[blk.k]);
    const auto b = f_slice_basis(model("K3"), false, 2, blk.k);
    for (int i = 1; i <= blk.rows; ++i)
      for (int j = 1; j <= blk.cols; ++j)
        CHECK(tensors_equal(k3.entries[k3.index_of(blk.k, i, j)],
                            outer(a.vectors[i - 1], b.vectors[j - 1])));
  }
}

TEST_CASE("split basis: errors") {
  CHECK_THROWS(build_split_basis(model("JC"), 4, contiguous_split(4, 3)));  // |B| = 1
  EdgeSplit overlapping;
  overlapping.A = {1, 2};
  overlapping.B = {2, 3};
  overlapping.alpha = 2;
  overlapping.beta = 2;
  CHECK_THROWS(build_split_basis(model("JC"), 4, overlapping));
}
