#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "osync/certify.hpp"
#include "osync/manifold.hpp"
#include "osync/model.hpp"

namespace osync {

enum class InitKind { GroundTruth, Random, Given };
enum class StopReason { CertifiedStop, FixedPoint, MaxIters, AbortedRankDeficient };

std::string to_string(InitKind kind);
InitKind init_kind_from_string(const std::string& name);
std::string to_string(StopReason reason);

struct SolverConfig {
  int max_iters = 500;
  double residual_tol = 1e-6;
  double gap_tol = 1e-8;
  // On ||S(t+1) - S(t)||_F / sqrt(nd).
  double fixed_point_tol = 1e-10;
  // Factorization rank; 0 means p = d.
  int p = 0;
  InitKind init = InitKind::GroundTruth;
  // Seeds the Random init and the rank-deficiency jitter.
  std::uint64_t seed = 0;
  std::optional<StiefelTuple> given;
  // Certificate check period; 0 picks 1 for nd <= 600 and 10 otherwise.
  int check_every = 0;
  SpectralOptions spectral;
};

struct SolveTrace {
  std::vector<double> objective;
  std::vector<double> residual;
  int iterations = 0;
  StopReason reason = StopReason::MaxIters;
  // Certificate of the returned iterate, when one was evaluated.
  std::optional<Certificate> certificate;
};

// S'_i = P(sum_j A_ij S_j), every block computed from the old S. A block
// whose polar factor is rank-deficient throws RankDeficient.
StiefelTuple power_step(const SyncProblem& problem, const StiefelTuple& s);

// ||(Lambda - A) S||_op.
double check_fixed_point(const SyncProblem& problem, const StiefelTuple& s);

// Projected power iteration from the configured start until the certificate
// stop (residual < residual_tol and lambda_{d+1}(C) > gap_tol), a fixed point
// or max_iters. A step hitting a rank-deficient block is retried once with a
// 1e-8 Gaussian jitter added to A S; a second failure ends the run with
// AbortedRankDeficient.
std::pair<StiefelTuple, SolveTrace> solve(const SyncProblem& problem, const SolverConfig& config);

}  // namespace osync
