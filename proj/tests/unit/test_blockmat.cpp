#include <sstream>

#include <gtest/gtest.h>

#include "osync/blockmat.hpp"
#include "osync/errors.hpp"
#include "osync/manifold.hpp"
#include "osync/rng.hpp"
#include "test_support.hpp"

namespace osync {
namespace {

Eigen::MatrixXd random_symmetric(int side, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const Eigen::MatrixXd g = gaussian_matrix(side, side, rng);
  return 0.5 * (g + g.transpose());
}

TEST(BlockMatrix, SymmetrizesInput) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 4, 3;
  const BlockMatrix b(2, 1, m);
  EXPECT_DOUBLE_EQ(b.dense()(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(b.dense()(1, 0), 3.0);
}

TEST(BlockMatrix, RejectsWrongShape) {
  EXPECT_THROW(BlockMatrix(2, 2, Eigen::MatrixXd::Zero(3, 3)), InputError);
  EXPECT_THROW(BlockMatrix(0, 2, Eigen::MatrixXd::Zero(0, 0)), InputError);
}

TEST(BlockMatrix, SynchronizedHasIdentityBlocks) {
  const BlockMatrix z = BlockMatrix::synchronized(4, 3);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      EXPECT_TRUE(z.block(i, j).isApprox(Eigen::MatrixXd::Identity(3, 3)));
    }
  }
}

TEST(BlockMatrix, Arithmetic) {
  const BlockMatrix a = BlockMatrix::identity(3, 2);
  const BlockMatrix b = 2.0 * a + a - a;
  EXPECT_TRUE(b.dense().isApprox(2.0 * Eigen::MatrixXd::Identity(6, 6)));
  EXPECT_THROW(a + BlockMatrix::identity(2, 3), InputError);
}

TEST(BlockDiagonal, LambdaMinAndDense) {
  Eigen::MatrixXd b0(2, 2), b1(2, 2);
  b0 << 2, 1, 1, 2;
  b1 << 5, 0, 0, 7;
  const BlockDiagonal bd(2, 2, {b0, b1});
  EXPECT_NEAR(bd.lambda_min(0), 1.0, 1e-14);
  EXPECT_NEAR(bd.lambda_min(1), 5.0, 1e-14);
  const Eigen::MatrixXd dense = bd.to_dense();
  EXPECT_DOUBLE_EQ(dense(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(dense(3, 3), 7.0);
  EXPECT_THROW(BlockDiagonal(2, 2, {b0}), InputError);
}

TEST(PartialTrace, OfSynchronizedIsDTimesOnes) {
  const Eigen::MatrixXd t = partial_trace(BlockMatrix::synchronized(5, 3));
  EXPECT_TRUE(t.isApprox(3.0 * Eigen::MatrixXd::Ones(5, 5)));
}

TEST(PartialTrace, MatchesLoopOverBlocks) {
  const int n = 4, d = 3;
  const BlockMatrix m(n, d, random_symmetric(n * d, 11));
  const Eigen::MatrixXd t = partial_trace(m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double tr = 0.0;
      for (int k = 0; k < d; ++k) tr += m.dense()(i * d + k, j * d + k);
      EXPECT_NEAR(t(i, j), tr, 1e-14);
    }
  }
}

TEST(Hadamard, WithSynchronizedGramKeepsDiagonalOfBlocks) {
  const int n = 3, d = 2;
  const BlockMatrix x(n, d, random_symmetric(n * d, 3));
  const BlockMatrix h = hadamard_with_gram(x, StiefelTuple::synchronized(n, d, d));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      EXPECT_DOUBLE_EQ(h.block(i, j)(0, 1), 0.0);
      EXPECT_DOUBLE_EQ(h.block(i, j)(0, 0), x.block(i, j)(0, 0));
    }
  }
}

TEST(Hadamard, NormBoundHoldsOnRandomInputs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 6, d = 2, p = 5;
    const BlockMatrix x(n, d, random_symmetric(n * d, seed));
    const StiefelTuple s = random_stiefel(n, d, p, seed + 100);
    EXPECT_LE(operator_norm(hadamard_with_gram(x, s)), operator_norm(x) * (1.0 + 1e-12));
  }
}

TEST(OperatorNorm, DenseMatchesReference) {
  Rng rng = make_rng(5);
  const Eigen::MatrixXd m = gaussian_matrix(40, 7, rng);
  EXPECT_NEAR(operator_norm(m), testing::reference_norm(m), 1e-10);
}

TEST(OperatorNorm, PowerIterationPathAgreesWithDense) {
  const BlockMatrix m(30, 3, random_symmetric(90, 8));
  SpectralOptions forced;
  forced.dense_norm_limit = 10;
  forced.power_tol = 1e-14;
  forced.power_max_iters = 100000;
  const double dense = operator_norm(m);
  EXPECT_NEAR(operator_norm(m, forced), dense, 1e-6 * dense);
  Rng rng = make_rng(9);
  const Eigen::MatrixXd rect = gaussian_matrix(80, 40, rng);
  EXPECT_NEAR(operator_norm(rect, forced), operator_norm(rect), 1e-6 * operator_norm(rect));
}

TEST(OperatorNorm, RejectsNonFinite) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  m(1, 1) = std::nan("");
  EXPECT_THROW(operator_norm(m), InputError);
}

TEST(EigenLow, SpectrumOfNIMinusZZt) {
  const int n = 7, d = 3;
  const Eigen::MatrixXd c =
      n * Eigen::MatrixXd::Identity(n * d, n * d) - BlockMatrix::synchronized(n, d).dense();
  const Eigen::VectorXd low = eigen_low(BlockMatrix(n, d, c), d + 1);
  for (int k = 0; k < d; ++k) EXPECT_NEAR(low(k), 0.0, 1e-12);
  EXPECT_NEAR(low(d), n, 1e-12);
}

TEST(EigenLow, LanczosPathAgreesWithDense) {
  const Eigen::MatrixXd sym = random_symmetric(300, 21);
  SpectralOptions forced;
  forced.dense_eigen_limit = 50;
  forced.lanczos_tol = 1e-11;
  const Eigen::VectorXd dense = eigen_low(sym, 4);
  const Eigen::VectorXd lanczos = eigen_low(sym, 4, forced);
  ASSERT_EQ(lanczos.size(), 4);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(lanczos(k), dense(k), 1e-7);
}

TEST(EigenLow, LanczosFindsClusteredZeros) {
  // C = n I - Z Z^T has a d-fold zero eigenvalue and then n.
  const int n = 120, d = 3;
  const Eigen::MatrixXd c =
      n * Eigen::MatrixXd::Identity(n * d, n * d) - BlockMatrix::synchronized(n, d).dense();
  SpectralOptions forced;
  forced.dense_eigen_limit = 10;
  const Eigen::VectorXd low = eigen_low(c, d + 1, forced);
  for (int k = 0; k < d; ++k) EXPECT_NEAR(low(k), 0.0, 1e-6);
  EXPECT_NEAR(low(d), n, 1e-6);
}

TEST(EigenLow, RejectsBadK) {
  const Eigen::MatrixXd sym = Eigen::MatrixXd::Identity(4, 4);
  EXPECT_THROW(eigen_low(sym, 0), InputError);
  EXPECT_THROW(eigen_low(sym, 5), InputError);
}

TEST(BlockCsv, RoundTripIsExact) {
  const BlockMatrix m(3, 2, random_symmetric(6, 4));
  std::stringstream ss;
  write_block_csv(m, ss);
  const BlockMatrix back = read_block_csv(ss);
  EXPECT_EQ(back.n(), 3);
  EXPECT_EQ(back.d(), 2);
  EXPECT_EQ(back.dense(), m.dense());
}

TEST(BlockCsv, RejectsMissingHeader) {
  std::stringstream ss("0,0,0,0,1\n");
  EXPECT_THROW(read_block_csv(ss), InputError);
}

}  // namespace
}  // namespace osync
