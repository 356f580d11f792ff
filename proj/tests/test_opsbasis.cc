#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.h"
#include "qric/channels.h"
#include "qric/labels.h"
#include "qric/opsbasis.h"

using namespace qric;

TEST(Weyl, ZeroIsIdentity) {
  for (int d : {2, 3, 5}) EXPECT_LT((weyl_matrix(WeylOp::u(d, 0, 0)) - Matrix::Identity(d, d)).norm(), 1e-15);
}

TEST(Weyl, U11QubitColumns) {
  const Matrix u = weyl_matrix(WeylOp::u(2, 1, 1));
  EXPECT_NEAR(std::abs(u(1, 0) - cplx{1.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(0, 1) - cplx{-1.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(0, 0)) + std::abs(u(1, 1)), 0.0, 1e-15);
}

TEST(Weyl, MatchesDefinitionAndRInvertsU) {
  for (int d : {2, 3, 5}) {
    for (int m = 0; m < d; ++m) {
      for (int n = 0; n < d; ++n) {
        const Matrix u = weyl_matrix(WeylOp::u(d, m, n));
        EXPECT_LT((u - oracle::weyl_u(d, m, n)).norm(), 1e-12);
        EXPECT_LT((u * u.adjoint() - Matrix::Identity(d, d)).norm(), 1e-10);
        const Matrix r = weyl_matrix(WeylOp::r(d, m, n));
        EXPECT_LT((r * oracle::weyl_u(d, -m, n) - Matrix::Identity(d, d)).norm(), 1e-12);
        EXPECT_LT((r - oracle::weyl_u(d, -m, n).adjoint()).norm(), 1e-12);
      }
    }
  }
}

TEST(Bell, ExplicitStates) {
  const double h = 1.0 / std::sqrt(2.0);
  const PureState b2 = bell_state(2, 0, 0, "X", "Y");
  EXPECT_NEAR(b2.amps()[0].real(), h, 1e-15);
  EXPECT_NEAR(b2.amps()[3].real(), h, 1e-15);
  const PureState b3 = bell_state(3, 0, 0, "X", "Y");
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(b3.amps()[j * 3 + j].real(), 1.0 / std::sqrt(3.0), 1e-15);
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) EXPECT_LT((bell_state(3, m, n, "X", "Y").amps() - oracle::bell(3, m, n)).norm(), 1e-14);
}

TEST(Bell, GramMatrixIsIdentity) {
  const int d = 3;
  for (int a = 0; a < d * d; ++a) {
    for (int b = 0; b < d * d; ++b) {
      const cplx o = overlap(bell_state(d, a / d, a % d, "X", "Y"), bell_state(d, b / d, b % d, "X", "Y"));
      EXPECT_NEAR(std::abs(o - cplx{a == b ? 1.0 : 0.0, 0.0}), 0.0, 1e-14);
    }
  }
}

TEST(Ghz, ThreeQubits) {
  const PureState g = ghz_state(2, {"a", "b", "c"}, 0, 0);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(g.amps()[0].real(), h, 1e-15);
  EXPECT_NEAR(g.amps()[7].real(), h, 1e-15);
}

TEST(Ghz, TwoLegsIsBell) {
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n)
      EXPECT_LT((ghz_state(3, {"X", "Y"}, m, n).amps() - bell_state(3, m, n, "X", "Y").amps()).norm(), 1e-14);
}

TEST(Ghz, U11OnThreeQubits) {
  // (I (x) U^{1,1} (x) U^{0,1}) applied densely to |G^{00}>.
  Vector g00 = Vector::Zero(8);
  g00[0] = g00[7] = 1.0 / std::sqrt(2.0);
  const Matrix op = oracle::kron(oracle::kron(Matrix(Matrix::Identity(2, 2)), oracle::weyl_u(2, 1, 1)), oracle::weyl_u(2, 0, 1));
  const Vector ref = op * g00;
  EXPECT_LT((ghz_state(2, {"a", "b", "c"}, 1, 1).amps() - ref).norm(), 1e-14);
  // (|011> - |100>)/sqrt 2
  EXPECT_NEAR(ref[3].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(ref[4].real(), -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Symmetric, SmallCases) {
  const PureState s = symmetric_state(2, {{1, 1}}, {"a", "b"});
  EXPECT_NEAR(s.amps()[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.amps()[2].real(), 1.0 / std::sqrt(2.0), 1e-15);
  const PureState z = symmetric_state(2, {{2, 0}}, {"a", "b"});
  EXPECT_NEAR(z.amps()[0].real(), 1.0, 1e-15);
}

TEST(Symmetric, ThreeDistinctIsAllPermutations) {
  const PureState s = symmetric_state(3, {{1, 1, 1}}, {"a", "b", "c"});
  Vector ref = Vector::Zero(27);
  std::vector<int> p{0, 1, 2};
  do ref[p[0] * 9 + p[1] * 3 + p[2]] = 1.0 / std::sqrt(6.0);
  while (std::next_permutation(p.begin(), p.end()));
  EXPECT_LT((s.amps() - ref).norm(), 1e-14);
}

TEST(Symmetric, OccupationVectorsCount) {
  // C(N+d-1, d-1)
  EXPECT_EQ(occupation_vectors(2, 3).size(), 4u);
  EXPECT_EQ(occupation_vectors(3, 2).size(), 6u);
  for (const auto& o : occupation_vectors(3, 4)) EXPECT_EQ(o.total(), 4);
}

TEST(Alpha, FormulaValues) {
  EXPECT_NEAR(alpha_coeff(2, 2, 1), std::sqrt(1.0 / 3.0), 1e-15);
  EXPECT_NEAR(alpha_coeff(2, 2, 2), std::sqrt(2.0 / 3.0), 1e-15);
}

TEST(Stabilizer, MaximallyMixedHasZeroOffIdentity) {
  const int d = 2, N = 2;
  const DensityOperator mm = DensityOperator::maximally_mixed(Register(d, labels::channel_register(N)));
  const StabilizerGroups g = channel_groups(N);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      const cplx e = stabilizer_expectation(mm, m, n, g);
      EXPECT_NEAR(std::abs(e - cplx{(m == 0 && n == 0) ? 1.0 : 0.0, 0.0}), 0.0, 1e-12);
    }
}

TEST(Stabilizer, ElementsCommute) {
  for (int d : {2, 3}) {
    for (int N : {2, 3}) {
      if (std::pow(d, 2 * N) > 800) continue;
      auto full = [&](int m, int n) {
        Matrix op = Matrix::Identity(1, 1);
        for (int s = 1; s <= N; ++s) op = oracle::kron(oracle::kron(op, oracle::weyl_u(d, -m, n)), oracle::weyl_u(d, m, n));
        return op;
      };
      for (int a = 0; a < d * d; ++a)
        for (int b = 0; b < d * d; ++b) {
          const Matrix x = full(a / d, a % d), y = full(b / d, b % d);
          EXPECT_LT((x * y - y * x).norm(), 1e-9);
        }
    }
  }
}

TEST(Stabilizer, DenseTraceMatchesForChannel) {
  const int d = 3, N = 2;
  const PureState psi = product_bell_channel(d, N, {1, 2, 2, 1});
  Matrix op = Matrix::Identity(1, 1);
  for (int s = 1; s <= N; ++s) op = oracle::kron(oracle::kron(op, oracle::weyl_u(d, -1, 2)), oracle::weyl_u(d, 1, 2));
  const PureState ordered = reorder(psi, labels::channel_register(N));
  const cplx dense = (ordered.amps().adjoint() * op * ordered.amps())(0, 0);
  EXPECT_NEAR(std::abs(dense - stabilizer_expectation(psi, 1, 2, channel_groups(N))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(dense - cplx{1.0, 0.0}), 0.0, 1e-12);
}
