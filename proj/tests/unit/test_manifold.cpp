#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "osync/errors.hpp"
#include "osync/manifold.hpp"
#include "osync/oracle.hpp"
#include "osync/rng.hpp"
#include "test_support.hpp"

namespace osync {
namespace {

using Eigen::MatrixXd;

TEST(StiefelTuple, ValidatesRows) {
  EXPECT_NO_THROW(StiefelTuple::synchronized(3, 2, 4));
  EXPECT_THROW(StiefelTuple(2, 2, 2, MatrixXd::Ones(4, 2)), InputError);
  EXPECT_THROW(StiefelTuple(2, 3, 2, MatrixXd::Zero(6, 2)), InputError);
}

TEST(StiefelTuple, ReferenceProductWithZIsBlockSum) {
  const StiefelTuple s = random_stiefel(5, 2, 4, 3);
  MatrixXd sum = MatrixXd::Zero(2, 4);
  for (int i = 0; i < 5; ++i) sum += s.block(i);
  EXPECT_TRUE(s.reference_product(StiefelTuple::synchronized(5, 2, 2)).isApprox(sum));
  EXPECT_THROW(s.reference_product(s), InputError);
}

TEST(PolarProject, IsPartialOrthogonal) {
  Rng rng = make_rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixXd m = gaussian_matrix(3, 5, rng);
    const MatrixXd q = polar_project(m);
    EXPECT_TRUE((q * q.transpose()).isApprox(MatrixXd::Identity(3, 3), 1e-12));
  }
}

TEST(PolarProject, MaximizesInnerProduct) {
  Rng rng = make_rng(2);
  const MatrixXd m = gaussian_matrix(2, 4, rng);
  const double best = polar_project(m).cwiseProduct(m).sum();
  for (int trial = 0; trial < 200; ++trial) {
    const MatrixXd q = random_stiefel(1, 2, 4, 1000 + trial).block(0);
    EXPECT_LE(q.cwiseProduct(m).sum(), best + 1e-12);
  }
}

TEST(PolarProject, FixesScaledOrthogonal) {
  const MatrixXd q = random_stiefel(1, 3, 3, 7).block(0);
  EXPECT_TRUE(polar_project(5.0 * q).isApprox(q, 1e-13));
  EXPECT_TRUE(polar_project(MatrixXd::Identity(3, 3) * 4.0).isApprox(MatrixXd::Identity(3, 3)));
}

TEST(PolarProject, MatchesInverseSquareRootFormula) {
  Rng rng = make_rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXd m = gaussian_matrix(3, 6, rng);
    EXPECT_TRUE(polar_project(m).isApprox(testing::reference_polar(m), 1e-10));
  }
}

TEST(PolarProject, RankDeficientThrows) {
  MatrixXd m(2, 3);
  m << 1, 2, 3, 2, 4, 6;
  EXPECT_THROW(polar_project(m), RankDeficient);
  try {
    polar_project(MatrixXd::Zero(2, 2));
  } catch (const RankDeficient& e) {
    EXPECT_EQ(e.ratio(), 0.0);
  }
  EXPECT_THROW(polar_project(MatrixXd::Ones(3, 2)), InputError);
}

TEST(TangentProject, ProducesTangentAndIsIdempotent) {
  const StiefelTuple s = random_stiefel(4, 2, 5, 9);
  Rng rng = make_rng(4);
  const MatrixXd pi = gaussian_matrix(8, 5, rng);
  const TangentTuple v = tangent_project(s, pi);
  EXPECT_TRUE(v.is_tangent_at(s, 1e-12));
  const TangentTuple again = tangent_project(s, v.stacked());
  EXPECT_TRUE(again.stacked().isApprox(v.stacked(), 1e-12));
}

TEST(TangentProject, IsSelfAdjoint) {
  const StiefelTuple s = random_stiefel(3, 2, 4, 10);
  Rng rng = make_rng(5);
  const MatrixXd a = gaussian_matrix(6, 4, rng);
  const MatrixXd b = gaussian_matrix(6, 4, rng);
  const double lhs = tangent_project(s, a).stacked().cwiseProduct(b).sum();
  const double rhs = a.cwiseProduct(tangent_project(s, b).stacked()).sum();
  EXPECT_NEAR(lhs, rhs, 1e-12);
}

TEST(Retract, ZeroStepIsIdentityAndStaysOnManifold) {
  const StiefelTuple s = random_stiefel(4, 3, 5, 12);
  EXPECT_TRUE(retract(s, MatrixXd::Zero(12, 5)).stacked().isApprox(s.stacked(), 1e-13));
  Rng rng = make_rng(6);
  const StiefelTuple r = retract(s, 0.3 * gaussian_matrix(12, 5, rng));
  EXPECT_EQ(r.p(), 5);
}

TEST(Align, ZQIsAtDistanceZero) {
  const MatrixXd q = random_stiefel(1, 3, 5, 13).block(0);
  const StiefelTuple s = StiefelTuple::synchronized(6, q);
  const StiefelTuple z = StiefelTuple::synchronized(6, 3, 3);
  EXPECT_TRUE(align(s, z).isApprox(q, 1e-12));
  EXPECT_NEAR(distance_to_sync(s, z), 0.0, 1e-12);
}

TEST(Distance, MatchesNuclearNormIdentity) {
  const StiefelTuple z = StiefelTuple::synchronized(7, 2, 2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StiefelTuple s = random_stiefel(7, 2, 4, seed);
    EXPECT_NEAR(distance_to_sync(s, z), brute_force_nuclear_distance(s), 1e-8);
  }
}

TEST(Distance, NonCanonicalReference) {
  const StiefelTuple g = testing::random_orthogonal_tuple(5, 3, 14);
  const MatrixXd q = random_stiefel(1, 3, 4, 15).block(0);
  MatrixXd gq = g.stacked() * q;
  EXPECT_NEAR(distance_to_sync(StiefelTuple(5, 3, 4, gq), g), 0.0, 1e-12);
}

TEST(Distance, RankDeficientAlignment) {
  // Z^T S = 0 for balanced signs; every Q is optimal and d_F^2 = 2 n d.
  MatrixXd s(4, 1);
  s << 1, 1, -1, -1;
  const StiefelTuple t(4, 1, 1, s);
  EXPECT_NEAR(distance_to_sync(t, StiefelTuple::synchronized(4, 1, 1)), std::sqrt(8.0), 1e-12);
  EXPECT_NEAR(brute_force_nuclear_distance(t), std::sqrt(8.0), 1e-12);
}

TEST(RandomStiefel, DeterministicAndSeedSensitive) {
  const StiefelTuple a = random_stiefel(5, 2, 4, 42);
  const StiefelTuple b = random_stiefel(5, 2, 4, 42);
  const StiefelTuple c = random_stiefel(5, 2, 4, 43);
  EXPECT_EQ(a.stacked(), b.stacked());
  EXPECT_GT((a.stacked() - c.stacked()).norm(), 1e-3);
}

TEST(TupleCsv, RoundTripIsExact) {
  const StiefelTuple s = random_stiefel(3, 2, 3, 5);
  std::stringstream ss;
  write_tuple_csv(s, ss);
  const StiefelTuple back = read_tuple_csv(ss);
  EXPECT_EQ(back.stacked(), s.stacked());
  EXPECT_EQ(back.p(), 3);
}

}  // namespace
}  // namespace osync
