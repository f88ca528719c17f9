#include "test_util.hpp"

using namespace phyloci;
using namespace phyloci::testutil;

TEST_CASE("no-evolution tensors") {
  NoEvolutionPoint pt;
  pt.pi = Vector(4);
  pt.pi << 1, 0, 0, 0;
  const Tensor t = no_evolution_tensor(model("GMM"), pt, 3);
  CHECK(t.data(0) == Complex(1, 0));  // only AAA
  CHECK(t.data.cwiseAbs().sum() == 1.0);

  pt.pi << 0.25, 0.25, 0.25, 0.25;
  const Tensor diag = no_evolution_tensor(model("JC"), pt, 2);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      CHECK(diag.data(x * 4 + y) == (x == y ? Complex(0.25, 0) : Complex(0, 0)));

  // the S4 orbit is the whole state set: any non-constant pi is rejected
  pt.pi << 1, 1, 1, 2;
  CHECK_THROWS(no_evolution_tensor(model("JC"), pt, 2));
  CHECK_NOTHROW(no_evolution_tensor(model("GMM"), pt, 2));
  // SS only requires pi_A = pi_T, pi_C = pi_G
  pt.pi << 1, 2, 2, 1;
  CHECK_NOTHROW(no_evolution_tensor(model("SS"), pt, 2));
}

TEST_CASE("marginalize") {
  Tensor ac = Tensor::zeros(4, 2);
  ac.data(0 * 4 + 1) = 1.0;  // A ⊗ C
  const Tensor m2 = marginalize(ac, 2);
  CHECK(m2.n == 1);
  CHECK(m2.data(0) == Complex(1, 0));  // 1·C = 1 leaves A

  // total mass is preserved: both sides equal the full contraction with 1
  Rng rng(5);
  Tensor r = Tensor::zeros(4, 3);
  for (long i = 0; i < r.size(); ++i) r.data(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  for (int leaf = 1; leaf <= 3; ++leaf)
    CHECK(std::abs(marginalize(r, leaf).data.sum() - r.data.sum()) < 1e-12);

  // image of a point of no evolution is a point of no evolution, same pi
  NoEvolutionPoint pt;
  pt.pi = Vector(4);
  pt.pi << 0.3, 0.1, 0.4, 0.2;
  const Tensor pi3 = no_evolution_tensor(model("GMM"), pt, 3);
  const Tensor pi2 = no_evolution_tensor(model("GMM"), pt, 2);
  for (int leaf = 1; leaf <= 3; ++leaf) CHECK(tensors_equal(marginalize(pi3, leaf), pi2));

  // marginalization commutes across distinct leaves
  CHECK(tensors_equal(marginalize(marginalize(r, 3), 1), marginalize(marginalize(r, 1), 2)));

  Tensor single = Tensor::zeros(4, 1);
  CHECK_THROWS(marginalize(single, 1));
}

TEST_CASE("fourier coordinates") {
  // pi = (1,0,0,0): A = (1/4)(A+C+G+T-bar), so every coordinate is 1/64
  NoEvolutionPoint pt;
  pt.pi = Vector(4);
  pt.pi << 1, 0, 0, 0;
  const Tensor q = fourier_coords(no_evolution_tensor(model("GMM"), pt, 3));
  for (long i = 0; i < q.size(); ++i) CHECK(std::abs(q.data(i) - Complex(1.0 / 64, 0)) < 1e-14);

  // uniform pi: q = 1/64 exactly when the word sums to A-bar, else 0
  // (the character sum contributes 4 and the transform 1/4^n = 1/64)
  pt.pi << 0.25, 0.25, 0.25, 0.25;
  const Tensor qu = fourier_coords(no_evolution_tensor(model("GMM"), pt, 3));
  auto gsum = [](int a, int b, int c) {
    auto bits = [](int v) { return std::pair<int, int>{(v == 1 || v == 3) ? 1 : 0,
                                                       (v == 2 || v == 3) ? 1 : 0}; };
    auto [a1, a2] = bits(a);
    auto [b1, b2] = bits(b);
    auto [c1, c2] = bits(c);
    return std::pair<int, int>{(a1 + b1 + c1) % 2, (a2 + b2 + c2) % 2};
  };
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        const Complex v = qu.data((a * 4 + b) * 4 + c);
        if (gsum(a, b, c) == std::pair<int, int>{0, 0})
          CHECK(std::abs(v - Complex(1.0 / 64, 0)) < 1e-14);
        else
          CHECK(std::abs(v) < 1e-14);
      }

  // roundtrip
  Rng rng(11);
  Tensor r = Tensor::zeros(4, 4);
  for (long i = 0; i < r.size(); ++i) r.data(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  CHECK((from_fourier(fourier_coords(r)).data - r.data).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("fourier closed form for no-evolution points") {
  // q_word = (1/4^n)(pi_A + chi_C(y) pi_C + chi_G(y) pi_G + chi_T(y) pi_T)
  Rng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    for (int n = 2; n <= 5; ++n) {
      NoEvolutionPoint pt;
      pt.pi = Vector(4);
      for (int i = 0; i < 4; ++i) pt.pi(i) = rng.uniform(-1, 1);
      const Tensor q = fourier_coords(no_evolution_tensor(model("GMM"), pt, n));
      const double scale = std::pow(4.0, n);
      // chi_X(Y-bar) is the X-entry of the Fourier vector Y-bar
      auto chi = [](int x, int y) { return fourier_vector(y)(x).real(); };
      for (long idx = 0; idx < q.size(); ++idx) {
        long rest = idx;
        int sum = 0;
        for (int p = 0; p < n; ++p) {
          const int digit = static_cast<int>(rest % 4);
          rest /= 4;
          auto bits = [](int v) { return std::pair<int, int>{(v == 1 || v == 3) ? 1 : 0,
                                                             (v == 2 || v == 3) ? 1 : 0}; };
          auto [d1, d2] = bits(digit);
          auto [s1, s2] = bits(sum);
          const int n1 = (d1 + s1) % 2, n2 = (d2 + s2) % 2;
          sum = n1 + 2 * n2;  // encode back: (1,0)->C=1, (0,1)->G=2, (1,1)->T=3
        }
        Complex expect = pt.pi(0);
        for (int x = 1; x < 4; ++x) expect += chi(x, sum) * pt.pi(x);
        expect /= scale;
        CHECK(std::abs(q.data(idx) - expect) < 1e-12);
      }
    }
  }
}

TEST_CASE("invariance checks and averaging") {
  NoEvolutionPoint pt;
  pt.pi = Vector(4);
  pt.pi << 1, 1, 1, 1;
  CHECK(is_invariant(no_evolution_tensor(model("JC"), pt, 3), model("JC"), 1e-12));

  Tensor ac = Tensor::zeros(4, 2);
  ac.data(0 * 4 + 1) = 1.0;  // A⊗C: its orbit partner under (AT)(CG) is T⊗G
  CHECK_FALSE(is_invariant(ac, model("SS"), 1e-12));

  const Tensor avg = group_average(model("SS"), ac);
  CHECK(is_invariant(avg, model("SS"), 1e-12));
  CHECK(tensors_equal(group_average(model("SS"), avg), avg));
}

TEST_CASE("dense-size cap and kappa restrictions") {
  CHECK_NOTHROW(Tensor::zeros(4, 13));
  CHECK_THROWS(Tensor::zeros(4, 14));  // beyond the 4^13 dense cap
  Tensor t5 = Tensor::zeros(5, 2);
  CHECK_THROWS_WITH_AS(fourier_coords(t5), doctest::Contains("kappa=4"), std::runtime_error);
}

TEST_CASE("slot permutation and outer products") {
  Tensor a = Tensor::zeros(4, 1), b = Tensor::zeros(4, 1);
  a.data(1) = 1.0;  // C
  b.data(2) = 1.0;  // G
  const Tensor cg = outer(a, b);
  CHECK(cg.at({1, 2}) == Complex(1, 0));
  const Tensor gc = permute_slots(cg, {2, 1});
  CHECK(gc.at({2, 1}) == Complex(1, 0));
  CHECK(std::abs(dot(cg, cg) - Complex(1, 0)) < 1e-14);
  CHECK(std::abs(dot(cg, gc)) < 1e-14);
}
