#include "osync/model.hpp"

#include <cmath>

#include "osync/errors.hpp"
#include "osync/rng.hpp"

namespace osync {

using Eigen::MatrixXd;

namespace {

void check_ground_truth(const StiefelTuple& g, int n, int d) {
  if (g.n() != n || g.d() != d || g.p() != d) {
    throw InputError("ground truth must be n blocks of d x d orthogonal matrices");
  }
}

MatrixXd gram(const StiefelTuple& g) { return g.stacked() * g.stacked().transpose(); }

}  // namespace

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::None: return "none";
    case NoiseKind::Custom: return "custom";
  }
  return "unknown";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "none") return NoiseKind::None;
  if (name == "custom") return NoiseKind::Custom;
  throw InputError("unknown noise kind '" + name + "'");
}

SyncProblem::SyncProblem(BlockMatrix a, double sigma, std::optional<StiefelTuple> ground_truth,
                         std::uint64_t seed, NoiseKind noise_kind)
    : a_(std::move(a)),
      sigma_(sigma),
      ground_truth_(std::move(ground_truth)),
      seed_(seed),
      noise_kind_(noise_kind) {
  if (!(sigma >= 0.0)) throw InputError("SyncProblem: sigma must be nonnegative");
  if (ground_truth_) check_ground_truth(*ground_truth_, a_.n(), a_.d());
  const MatrixXd eye = MatrixXd::Identity(a_.d(), a_.d());
  for (int i = 0; i < a_.n(); ++i) {
    if ((a_.block(i, i) - eye).cwiseAbs().maxCoeff() > 1e-12) {
      throw InputError("SyncProblem: diagonal block " + std::to_string(i) + " is not I_d");
    }
  }
}

StiefelTuple SyncProblem::truth_or_canonical() const {
  if (ground_truth_) return *ground_truth_;
  return StiefelTuple::synchronized(n(), d(), d());
}

BlockMatrix SyncProblem::noise() const {
  MatrixXd delta = a_.dense() - gram(truth_or_canonical());
  for (int i = 0; i < n(); ++i) delta.block(i * d(), i * d(), d(), d()).setZero();
  return BlockMatrix(n(), d(), std::move(delta));
}

double sigma_from_kappa(double kappa, int n, int d) {
  if (!(kappa >= 0.0)) throw InputError("kappa must be nonnegative");
  return kappa * std::sqrt(static_cast<double>(n) / d);
}

BlockMatrix wigner_blocks(int n, int d, std::uint64_t seed) {
  if (n < 2 || d < 1) throw InputError("wigner_blocks: need n >= 2 and d >= 1");
  Rng rng = make_rng(derive_stream({seed, static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(d), 0x5e1ULL}));
  MatrixXd w = MatrixXd::Zero(n * d, n * d);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const MatrixXd blk = gaussian_matrix(d, d, rng);
      w.block(i * d, j * d, d, d) = blk;
      w.block(j * d, i * d, d, d) = blk.transpose();
    }
  }
  return BlockMatrix(n, d, std::move(w));
}

SyncProblem generate_gaussian(int n, int d, double sigma, std::uint64_t seed) {
  if (n < 2 || d < 1) throw InputError("generate_gaussian: need n >= 2 and d >= 1");
  if (!(sigma >= 0.0)) throw InputError("generate_gaussian: sigma must be nonnegative");
  MatrixXd a = BlockMatrix::synchronized(n, d).dense();
  if (sigma > 0.0) a += sigma * wigner_blocks(n, d, seed).dense();
  return SyncProblem(BlockMatrix(n, d, std::move(a)), sigma, StiefelTuple::synchronized(n, d, d),
                     seed, sigma > 0.0 ? NoiseKind::Gaussian : NoiseKind::None);
}

SyncProblem from_noise(const BlockMatrix& delta, std::optional<StiefelTuple> ground_truth) {
  const int n = delta.n();
  const int d = delta.d();
  for (int i = 0; i < n; ++i) {
    if (delta.block(i, i).cwiseAbs().maxCoeff() > 1e-12) {
      throw InputError("from_noise: Delta_ii must be zero");
    }
  }
  const StiefelTuple g = ground_truth ? *ground_truth : StiefelTuple::synchronized(n, d, d);
  check_ground_truth(g, n, d);
  MatrixXd a = gram(g) + delta.dense();
  for (int i = 0; i < n; ++i) a.block(i * d, i * d, d, d).setIdentity();
  return SyncProblem(BlockMatrix(n, d, std::move(a)), 0.0, std::move(ground_truth), 0,
                     NoiseKind::Custom);
}

SyncProblem reduce_to_canonical(const SyncProblem& problem) {
  if (!problem.ground_truth()) {
    throw InputError("reduce_to_canonical: the instance has no ground truth");
  }
  const StiefelTuple& g = *problem.ground_truth();
  const int n = problem.n();
  const int d = problem.d();
  const MatrixXd& a = problem.data().dense();
  MatrixXd out(n * d, n * d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.block(i * d, j * d, d, d) = g.block(i).transpose() * a.block(i * d, j * d, d, d) * g.block(j);
    }
    out.block(i * d, i * d, d, d).setIdentity();
  }
  return SyncProblem(BlockMatrix(n, d, std::move(out)), problem.sigma(),
                     StiefelTuple::synchronized(n, d, d), problem.seed(), problem.noise_kind());
}

StiefelTuple to_canonical_frame(const StiefelTuple& ground_truth, const StiefelTuple& r) {
  check_ground_truth(ground_truth, r.n(), r.d());
  const int d = r.d();
  MatrixXd out(r.stacked().rows(), r.p());
  for (int i = 0; i < r.n(); ++i) {
    out.middleRows(i * d, d) = ground_truth.block(i).transpose() * r.block(i);
  }
  return StiefelTuple(r.n(), d, r.p(), std::move(out));
}

double objective(const SyncProblem& problem, const StiefelTuple& s) {
  if (s.n() != problem.n() || s.d() != problem.d()) {
    throw InputError("objective: candidate dimensions do not match the instance");
  }
  const MatrixXd as = problem.data().dense() * s.stacked();
  return s.stacked().cwiseProduct(as).sum();
}

}  // namespace osync
