#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "osync/blockmat.hpp"
#include "osync/manifold.hpp"

namespace osync {

enum class NoiseKind { Gaussian, None, Custom };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

// An O(d) synchronization instance A = G G^T + Delta with A_ii = I_d and
// Delta_ii = 0. When no ground truth is attached the instance is taken to
// be in canonical form, G = Z with Z^T = [I_d, ..., I_d].
class SyncProblem {
 public:
  SyncProblem(BlockMatrix a, double sigma, std::optional<StiefelTuple> ground_truth,
              std::uint64_t seed, NoiseKind noise_kind);

  int n() const { return a_.n(); }
  int d() const { return a_.d(); }
  const BlockMatrix& data() const { return a_; }
  double sigma() const { return sigma_; }
  const std::optional<StiefelTuple>& ground_truth() const { return ground_truth_; }
  std::uint64_t seed() const { return seed_; }
  NoiseKind noise_kind() const { return noise_kind_; }

  // The ground truth, or Z when none is attached.
  StiefelTuple truth_or_canonical() const;
  // Delta = A - G G^T.
  BlockMatrix noise() const;

 private:
  BlockMatrix a_;
  double sigma_;
  std::optional<StiefelTuple> ground_truth_;
  std::uint64_t seed_;
  NoiseKind noise_kind_;
};

// sigma = kappa * sqrt(n / d).
double sigma_from_kappa(double kappa, int n, int d);

// A = Z Z^T + sigma W with W symmetric, W_ij i.i.d. N(0, 1) entries for
// i < j, W_ji = W_ij^T and W_ii = 0.
SyncProblem generate_gaussian(int n, int d, double sigma, std::uint64_t seed);

// The symmetric block-Gaussian W alone (zero diagonal blocks), drawn from the
// same stream generate_gaussian() uses.
BlockMatrix wigner_blocks(int n, int d, std::uint64_t seed);

// A = G G^T + Delta for a caller-supplied Delta (Delta_ii must vanish). G
// defaults to Z.
SyncProblem from_noise(const BlockMatrix& delta, std::optional<StiefelTuple> ground_truth = {});

// Change of variables Delta_ij <- G_i^T Delta_ij G_j. The returned instance
// has ground truth Z and blocks I_d + G_i^T Delta_ij G_j.
SyncProblem reduce_to_canonical(const SyncProblem& problem);

// R_i <- G_i^T R_i: maps a candidate of the original instance to the
// canonical one.
StiefelTuple to_canonical_frame(const StiefelTuple& ground_truth, const StiefelTuple& r);

// f(S) = <A, S S^T> = sum_ij <A_ij, S_i S_j^T>.
double objective(const SyncProblem& problem, const StiefelTuple& s);

}  // namespace osync
