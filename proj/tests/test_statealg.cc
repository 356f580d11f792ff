#include <gtest/gtest.h>

#include <cstdlib>
#include <map>

#include "oracles.h"
#include "qric/analysis.h"
#include "qric/opsbasis.h"

using namespace qric;

namespace {

PureState ket(int d, std::vector<std::string> labels, std::vector<int> dits) {
  return PureState::basis(Register(d, std::move(labels)), dits);
}

struct EnvGuard {
  explicit EnvGuard(const char* value) { setenv("QRIC_MAX_DIM", value, 1); }
  ~EnvGuard() { unsetenv("QRIC_MAX_DIM"); }
};

}  // namespace

TEST(Tensor, BasisKets) {
  const PureState s = tensor(ket(2, {"X"}, {0}), ket(2, {"Y"}, {1}));
  EXPECT_EQ(s.labels(), (std::vector<std::string>{"X", "Y"}));
  EXPECT_NEAR(std::abs(s.amp(std::vector<int>{0, 1}) - cplx{1.0, 0.0}), 0.0, 1e-15);
}

TEST(Tensor, PlusTimesZero) {
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const PureState s = tensor(PureState(Register(2, {"X"}), plus), ket(2, {"Y"}, {0}));
  const double h = 1.0 / std::sqrt(2.0);
  const double expect[4] = {h, 0.0, h, 0.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s.amps()[i] - expect[i]), 0.0, 1e-15);
}

TEST(Tensor, TwoBellPairsMatchDoubleSum) {
  const int d = 3;
  const PureState s = tensor(bell_state(d, 0, 0, "X", "Y"), bell_state(d, 0, 0, "X'", "Y'"));
  ASSERT_EQ(s.amps().size(), 81);
  EXPECT_NEAR(s.norm(), 1.0, 1e-12);
  Vector ref = Vector::Zero(81);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) ref[((j * d + j) * d + k) * d + k] = 1.0 / 3.0;
  EXPECT_LT((s.amps() - ref).norm(), 1e-12);
}

TEST(Register, BigEndianIndexAgainstStringMap) {
  for (int d : {2, 3, 4}) {
    for (int n = 1; n <= 4; ++n) {
      std::vector<std::string> labels;
      for (int k = 0; k < n; ++k) labels.push_back("q" + std::to_string(k));
      const Register reg(d, labels);
      // Slow oracle: enumerate dit strings in lexicographic order.
      std::map<std::string, std::uint64_t> order;
      std::vector<int> dits(n, 0);
      std::uint64_t counter = 0;
      while (true) {
        std::string key;
        for (int x : dits) key += char('0' + x);
        order[key] = counter++;
        int pos = n - 1;
        while (pos >= 0 && ++dits[pos] == d) dits[pos--] = 0;
        if (pos < 0) break;
      }
      for (const auto& [key, idx] : order) {
        std::vector<int> ds;
        for (char c : key) ds.push_back(c - '0');
        EXPECT_EQ(reg.index(ds), idx);
        EXPECT_EQ(reg.dits(idx), ds);
      }
    }
  }
}

TEST(ApplyLocal, IdentityLeavesStateAlone) {
  std::mt19937_64 rng(1);
  const PureState s(Register(3, {"a", "b"}), oracle::random_vector(9, rng));
  const PureState out = apply_local(s, weyl_matrix(WeylOp::r(3, 0, 0)), "b");
  EXPECT_LT((out.amps() - s.amps()).norm(), 1e-14);
}

TEST(ApplyLocal, ROneShiftMapsOneToZero) {
  const PureState out = apply_local(ket(3, {"a"}, {1}), weyl_matrix(WeylOp::r(3, 0, 1)), "a");
  EXPECT_NEAR(std::abs(out.amps()[0] - cplx{1.0, 0.0}), 0.0, 1e-14);
}

TEST(ApplyLocal, RPhaseFlipsPlus) {
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const PureState out = apply_local(PureState(Register(2, {"a"}), plus), weyl_matrix(WeylOp::r(2, 1, 0)), "a");
  const Vector ref = oracle::weyl_u(2, 1, 0).adjoint() * plus;  // R^{1,0} = (U^{-1,0})^dagger = (U^{1,0})^dagger at d = 2
  EXPECT_LT((out.amps() - ref).norm(), 1e-14);
  EXPECT_NEAR(out.amps()[1].real(), -1.0 / std::sqrt(2.0), 1e-14);
}

TEST(ApplyLocal, MatchesDenseEmbedding) {
  std::mt19937_64 rng(7);
  for (int d : {2, 3, 4}) {
    const int n = 3;
    const int dim = d * d * d;
    const PureState s(Register(d, {"a", "b", "c"}), oracle::random_vector(dim, rng));
    const Matrix op = oracle::random_matrix(d, rng);
    const char* names[] = {"a", "b", "c"};
    for (int pos = 0; pos < n; ++pos) {
      Vector out = s.amps();
      apply_local_inplace(std::span<cplx>(out.data(), static_cast<std::size_t>(out.size())), d, n,
                          static_cast<std::size_t>(pos), op);
      EXPECT_LT((out - oracle::embed(op, d, n, pos) * s.amps()).norm(), 1e-12) << "d=" << d << " pos=" << names[pos];
    }
  }
}

TEST(ApplyLocal, UnitariesPreserveNorm) {
  std::mt19937_64 rng(11);
  for (int d : {2, 3, 5}) {
    PureState s(Register(d, {"a", "b", "c"}), oracle::random_vector(d * d * d, rng));
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        s = apply_local(s, weyl_matrix(WeylOp::u(d, m, n)), "b", true);
        EXPECT_NEAR(s.norm(), 1.0, 1e-10);
      }
  }
}

TEST(PartialTrace, BellMarginalIsMaximallyMixed) {
  const std::vector<std::string> keep{"X"};
  const DensityOperator rho = partial_trace(bell_state(2, 0, 0, "X", "Y"), keep);
  EXPECT_LT((rho.mat() - Matrix::Identity(2, 2) / 2.0).norm(), 1e-14);
}

TEST(PartialTrace, ProductState) {
  const std::vector<std::string> keep{"X"};
  const DensityOperator rho = partial_trace(ket(2, {"X", "Y"}, {0, 0}), keep);
  EXPECT_NEAR(std::abs(rho.mat()(0, 0) - cplx{1.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(rho.mat().norm(), 1.0, 1e-15);
}

TEST(PartialTrace, MatchesExplicitSumsOnRandomStates) {
  std::mt19937_64 rng(3);
  for (int d : {2, 3, 4}) {
    for (int n = 2; n <= (d == 2 ? 8 : 4); ++n) {
      std::vector<std::string> labels;
      for (int k = 0; k < n; ++k) labels.push_back("q" + std::to_string(k));
      const int dim = static_cast<int>(std::pow(d, n));
      const Vector v = oracle::random_vector(dim, rng);
      const PureState s(Register(d, labels), v);
      const int keep_n = n / 2;
      const std::vector<std::string> keep(labels.begin(), labels.begin() + keep_n);
      const DensityOperator rho = partial_trace(s, keep);
      EXPECT_LT((rho.mat() - oracle::trace_tail(v, d, n, keep_n)).norm(), 1e-12);
      EXPECT_NEAR(rho.trace(), 1.0, 1e-10);
      EXPECT_GE(rho.min_eigenvalue(), -1e-10);
    }
  }
}

TEST(Permute, SwapOnSymmetricBell) {
  const PureState b = bell_state(2, 0, 0, "X", "Y");
  EXPECT_LT((permute(b, {{"X", "Y"}, {"Y", "X"}}).amps() - b.amps()).norm(), 1e-15);
}

TEST(Permute, SwapZeroOne) {
  const PureState out = permute(ket(2, {"X", "Y"}, {0, 1}), {{"X", "Y"}, {"Y", "X"}});
  EXPECT_NEAR(std::abs(out.amp(std::vector<int>{1, 0})), 1.0, 1e-15);
}

TEST(Permute, InverseRelabelingRoundTrips) {
  std::mt19937_64 rng(5);
  const PureState s(Register(3, {"a", "b", "c"}), oracle::random_vector(27, rng));
  const std::map<std::string, std::string> cyc{{"a", "b"}, {"b", "c"}, {"c", "a"}};
  const std::map<std::string, std::string> inv{{"b", "a"}, {"c", "b"}, {"a", "c"}};
  EXPECT_LT((permute(permute(s, cyc), inv).amps() - s.amps()).norm(), 1e-14);
}

TEST(Overlap, BasisAndPhase) {
  EXPECT_NEAR(std::abs(overlap(ket(2, {"a"}, {0}), ket(2, {"a"}, {0})) - cplx{1.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(overlap(ket(2, {"a"}, {0}), ket(2, {"a"}, {1}))), 0.0, 1e-15);
  const PureState b = bell_state(3, 1, 1, "X", "Y");
  const PureState phased(b.reg(), b.amps() * std::polar(1.0, std::numbers::pi / 7));
  EXPECT_TRUE(equal_up_to_phase(phased, b, 1e-10));
}

TEST(Entropy, Cuts) {
  const Cut xy{{"X"}, {"Y"}};
  EXPECT_NEAR(entropy_across_cut(ket(2, {"X", "Y"}, {0, 0}), xy), 0.0, 1e-12);
  EXPECT_NEAR(entropy_across_cut(bell_state(3, 0, 0, "X", "Y"), xy), std::log2(3.0), 1e-12);
  const Cut c{{"A'_1", "1'", "A'_2"}, {"2'"}};
  EXPECT_NEAR(entropy_across_cut(ghz_channel(2, 2), c), 1.0, 1e-12);
}

TEST(SizeGuard, RefusesOversizedStates) {
  EnvGuard env("64");
  EXPECT_THROW(PureState::basis(Register(2, {"a", "b", "c", "d", "e", "f", "g"}), std::vector<int>(7, 0)),
               SizeGuardError);
  EXPECT_NO_THROW(PureState::basis(Register(2, {"a", "b", "c", "d", "e", "f"}), std::vector<int>(6, 0)));
}

TEST(SizeGuard, DefaultAndMalformedOverride) {
  EXPECT_EQ(max_pure_dim(), kDefaultMaxPureDim);
  EnvGuard env("abc");
  EXPECT_THROW(max_pure_dim(), InvalidArgument);
}

TEST(PureStateCtor, RejectsUnnormalized) {
  Vector v = Vector::Ones(2);
  EXPECT_THROW(PureState(Register(2, {"a"}), v), InvalidArgument);
  EXPECT_THROW(Register(2, {"a", "a"}), InvalidArgument);
}

TEST(Rng, DeterministicAndDerived) {
  Rng a = derive_rng(42, 3), b = derive_rng(42, 3), c = derive_rng(42, 4);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  Rng r = derive_rng(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(r);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, SampleIndexFollowsWeights) {
  const std::vector<double> w{0.1, 0.0, 0.6, 0.3};
  Rng r = derive_rng(9, 0);
  std::vector<int> counts(4, 0);
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) ++counts[sample_index(w, r)];
  EXPECT_EQ(counts[1], 0);
  oracle::expect_multinomial(w, counts, trials);
}

TEST(Rng, RandomUnitVectorIsNormalized) {
  Rng r = derive_rng(5, 1);
  for (int i = 0; i < 20; ++i) {
    const auto v = random_unit_vector(4, r);
    double n2 = 0.0;
    for (auto z : v) n2 += std::norm(z);
    EXPECT_NEAR(n2, 1.0, 1e-12);
  }
}
