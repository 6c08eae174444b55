#include <cmath>

#include <gtest/gtest.h>

#include "osync/certify.hpp"
#include "osync/errors.hpp"
#include "osync/landscape.hpp"
#include "osync/solver.hpp"
#include "test_support.hpp"

namespace osync {
namespace {

using Eigen::MatrixXd;

StiefelTuple solve_tight(const SyncProblem& problem, int p, std::uint64_t seed) {
  SolverConfig config;
  config.init = InitKind::Random;
  config.p = p;
  config.seed = seed;
  config.max_iters = 5000;
  config.residual_tol = 1e-10;
  config.fixed_point_tol = 1e-15;
  return solve(problem, config).first;
}

TEST(RiemannianGradient, ZeroAtNoiselessZAndTangent) {
  const SyncProblem p = generate_gaussian(6, 2, 0.0, 1);
  EXPECT_LE(riemannian_gradient(p, StiefelTuple::synchronized(6, 2, 4)).stacked().norm(), 1e-12);
  const SyncProblem q = generate_gaussian(6, 2, 0.5, 2);
  const StiefelTuple s = random_stiefel(6, 2, 3, 3);
  EXPECT_TRUE(riemannian_gradient(q, s).is_tangent_at(s, 1e-12));
}

TEST(RiemannianGradient, MatchesFiniteDifferences) {
  // Along the polar retraction the directional derivative is 2 <grad, V>,
  // so half the ambient finite-difference gradient equals grad.
  for (int c = 0; c < 100; ++c) {
    const int n = 3 + c % 3, d = 1 + c % 3, p = std::max(2, d + (c / 3) % (d + 1));
    const auto seed = static_cast<std::uint64_t>(c);
    const SyncProblem prob = generate_gaussian(n, d, 0.1 + 0.02 * (c % 10), 7000 + seed);
    const StiefelTuple s = random_stiefel(n, d, p, 8000 + seed);
    const MatrixXd grad = riemannian_gradient(prob, s).stacked();
    const MatrixXd fd = 0.5 * testing::fd_gradient(prob, s, 1e-6);
    EXPECT_LT((fd - grad).norm() / grad.norm(), 1e-5) << "case " << c;
  }
}

TEST(HessianQuadform, MatchesSecondDifferences) {
  for (int c = 0; c < 50; ++c) {
    const int n = 3 + c % 4, d = 1 + c % 3, p = d + 1 + (c / 3) % (d + 1);
    const auto seed = static_cast<std::uint64_t>(c);
    const SyncProblem prob = generate_gaussian(n, d, 0.3, 9000 + seed);
    const StiefelTuple s = random_stiefel(n, d, p, 9500 + seed);
    const TangentTuple v = sample_tangent_directions(s, 1, 9900 + seed).front();
    const double q = hessian_quadform(prob, s, v);
    const double fd = 0.5 * testing::fd_second(prob, s, v.stacked(), 1e-4);
    EXPECT_LT(std::abs(fd - q) / std::max(std::abs(q), 1.0), 1e-4) << "case " << c;
  }
}

TEST(HessianQuadform, ZeroDirectionAndClosedForm) {
  // At S = [Z | 0] with A = Z Z^T and V_i = x_i e_p^T,
  // the quadform is ||sum_i x_i||^2 - n sum_i ||x_i||^2.
  const int n = 5, d = 2, p = 3;
  const SyncProblem prob = generate_gaussian(n, d, 0.0, 1);
  const StiefelTuple s = StiefelTuple::synchronized(n, d, p);
  EXPECT_DOUBLE_EQ(hessian_quadform(prob, s, TangentTuple(n, d, p, MatrixXd::Zero(n * d, p))), 0.0);
  Rng rng = make_rng(3);
  const MatrixXd x = gaussian_matrix(n * d, 1, rng);
  MatrixXd v = MatrixXd::Zero(n * d, p);
  v.col(p - 1) = x;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < n; ++i) sum += x.middleRows(i * d, d);
  const double expect = sum.squaredNorm() - n * x.squaredNorm();
  EXPECT_NEAR(hessian_quadform(prob, s, TangentTuple(n, d, p, v)), expect, 1e-12);
}

TEST(HessianQuadform, RejectsNonTangentDirection) {
  const SyncProblem prob = generate_gaussian(3, 2, 0.0, 1);
  const StiefelTuple s = StiefelTuple::synchronized(3, 2, 2);
  EXPECT_THROW(hessian_quadform(prob, s, TangentTuple(3, 2, 2, s.stacked())), InputError);
}

TEST(SampleTangentDirections, TangentAndUnitNorm) {
  for (int p : {2, 3, 5}) {
    const StiefelTuple s = random_stiefel(6, 2, p, 40 + p);
    const auto dirs = sample_tangent_directions(s, 8, 1);
    ASSERT_EQ(dirs.size(), 8u);
    for (const TangentTuple& v : dirs) {
      EXPECT_TRUE(v.is_tangent_at(s, 1e-10));
      EXPECT_NEAR(v.stacked().norm(), 1.0, 1e-12);
    }
  }
}

TEST(SocpTest, NoiselessZPasses) {
  const SyncProblem p = generate_gaussian(10, 3, 0.0, 1);
  const SocpReport r = sample_socp_test(p, StiefelTuple::synchronized(10, 3, 7), 20, 1);
  EXPECT_TRUE(r.is_socp_numerically);
  EXPECT_EQ(r.num_directions, 20);
  EXPECT_LE(r.max_hessian_quadform, 1e-8);
  for (Eigen::Index i = 0; i < r.lambda_min_blocks.size(); ++i) {
    EXPECT_NEAR(r.lambda_min_blocks(i), 10.0, 1e-10);
  }
}

TEST(SocpTest, FlippedSignFailsOnBlockEigenvalues) {
  const SyncProblem p = generate_gaussian(4, 1, 0.0, 1);
  MatrixXd s = MatrixXd::Ones(4, 1);
  s(3, 0) = -1.0;
  const SocpReport r = sample_socp_test(p, StiefelTuple(4, 1, 1, s), 10, 2);
  EXPECT_LT(r.grad_norm, 1e-12);
  EXPECT_NEAR(r.lambda_min_blocks(3), -2.0, 1e-12);
  EXPECT_FALSE(r.is_socp_numerically);
}

TEST(SocpTest, CertifiedPointPasses) {
  const int n = 60, d = 3;
  const SyncProblem p = generate_gaussian(n, d, sigma_from_kappa(0.2, n, d), 17);
  const auto [s, trace] = solve(p, SolverConfig{});
  ASSERT_EQ(trace.reason, StopReason::CertifiedStop);
  EXPECT_TRUE(sample_socp_test(p, s, 30, 3).is_socp_numerically);
}

TEST(BmAudit, EqualityAtNoiselessZ) {
  for (int d : {1, 2, 3}) {
    const int n = 6, p = 2 * d + 1;
    const SyncProblem prob = generate_gaussian(n, d, 0.0, 1);
    const AuditReport r = bm_inequality_audit(prob, StiefelTuple::synchronized(n, d, p));
    const double n2d = double(n) * n * d;
    EXPECT_NEAR(r.second_order_lhs, (p - d) * n2d, 1e-9);
    EXPECT_NEAR(r.second_order_rhs, (p - 2 * d) * n2d + d * n2d, 1e-9);
    EXPECT_NEAR(r.second_order_margin(), 0.0, 1e-9);
    EXPECT_NEAR(r.first_order_margin(), 0.0, 1e-9);
  }
}

TEST(BmAudit, RejectsNonCriticalPoint) {
  const SyncProblem prob = generate_gaussian(6, 2, 0.2, 1);
  EXPECT_THROW(bm_inequality_audit(prob, random_stiefel(6, 2, 5, 2)), InputError);
}

TEST(BmAudit, MarginsNonNegativeAtBurerMonteiroSolutions) {
  for (int d : {1, 2, 3}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const int n = 40, p = 2 * d + 1;
      const SyncProblem prob = generate_gaussian(n, d, sigma_from_kappa(0.2, n, d), 300 + seed);
      const StiefelTuple s = solve_tight(prob, p, seed);
      ASSERT_LT(check_fixed_point(prob, s), 1e-8);
      const AuditReport r = bm_inequality_audit(prob, s);
      const double scale = double(n) * n * d;
      EXPECT_GE(r.second_order_margin(), -1e-9 * scale) << "d=" << d << " seed=" << seed;
      EXPECT_GE(r.first_order_margin(), -1e-9 * scale) << "d=" << d << " seed=" << seed;
      const BlockMatrix noise = prob.noise();
      const double delta = bm_delta(p, d, anisotropy_gamma(noise));
      EXPECT_TRUE(proximity_check(s, StiefelTuple::synchronized(n, d, d), noise, delta));
    }
  }
}

TEST(BmAudit, NonCanonicalGroundTruthMatchesReducedInstance) {
  const int n = 20, d = 2, p = 5;
  const StiefelTuple g = testing::random_orthogonal_tuple(n, d, 5);
  const SyncProblem prob = from_noise(testing::random_noise(n, d, 0.3, 6), g);
  const StiefelTuple s = solve_tight(prob, p, 7);
  ASSERT_LT(check_fixed_point(prob, s), 1e-8);
  const AuditReport direct = bm_inequality_audit(prob, s);
  const AuditReport reduced =
      bm_inequality_audit(reduce_to_canonical(prob), to_canonical_frame(g, s));
  EXPECT_NEAR(direct.second_order_margin(), reduced.second_order_margin(), 1e-8);
  EXPECT_NEAR(direct.first_order_margin(), reduced.first_order_margin(), 1e-8);
}

}  // namespace
}  // namespace osync
